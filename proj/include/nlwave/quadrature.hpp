#pragma once

#include <functional>
#include <span>
#include <utility>

#include "nlwave/grid.hpp"

namespace nlwave::quadrature {

/// Integral of the sampled function over the whole grid.
/// Composite Simpson for an odd node count; for an even count, Simpson on the
/// first n-4 intervals plus one 3/8 panel on the last three. Exact for cubics.
double integrate(std::span<const double> samples, const UniformGrid& grid);

/// Integral over the node range [i0, i1] of the grid. Segments of a single
/// interval are handled with the interpolating cubic through the four nearest
/// grid nodes, so every segment rule stays exact on cubics.
double integrate_segment(std::span<const double> samples, const UniformGrid& grid, int i0, int i1);

/// (integral over [a, t_split], integral over [t_split, b]).
std::pair<double, double> integrate_split(std::span<const double> samples,
                                          const UniformGrid& grid, int split_index);

/// Integrate a callable on n uniform nodes over [a, b].
double integrate_function(const std::function<double(double)>& f, double a, double b, int n);

/// L2(a,b) norm of a callable, by Simpson on n nodes.
double l2_norm(const std::function<double(double)>& f, double a, double b, int n);

/// L2 norm over the rectangle [0,1] x [0,T]: tensorised Simpson.
double l2_norm_2d(const std::function<double(double, double)>& f,
                  const UniformGrid& xgrid, const UniformGrid& tgrid);

}  // namespace nlwave::quadrature
