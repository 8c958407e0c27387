#include "nlwave/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace nlwave::quadrature {

namespace {

// Composite Simpson over points [i0, i1], (i1-i0) even.
double simpson_run(std::span<const double> s, double h, int i0, int i1) {
  double acc = s[i0] + s[i1];
  for (int i = i0 + 1; i < i1; ++i) acc += s[i] * ((i - i0) % 2 ? 4.0 : 2.0);
  return acc * h / 3.0;
}

// Single 3/8 panel over points [i0, i0+3].
double three_eighths_panel(std::span<const double> s, double h, int i0) {
  return 3.0 * h / 8.0 * (s[i0] + 3.0 * s[i0 + 1] + 3.0 * s[i0 + 2] + s[i0 + 3]);
}

// One interval [j, j+1] integrated with the cubic through four consecutive
// nodes s..s+3 chosen around it. Weights are the exact Lagrange integrals.
double cubic_interval(std::span<const double> smp, double h, int j, int n) {
  if (n < 4) {
    if (n == 3) {
      // quadratic through all three nodes, integrated over [x_j, x_{j+1}]
      // (nodes u = 0,1,2 in units of h; interval [j, j+1])
      const double f0 = smp[0], f1 = smp[1], f2 = smp[2];
      if (j == 0) return h * (5.0 * f0 + 8.0 * f1 - f2) / 12.0;
      return h * (-f0 + 8.0 * f1 + 5.0 * f2) / 12.0;
    }
    return h * (smp[j] + smp[j + 1]) / 2.0;  // n == 2: trapezoid is all we have
  }
  int s = std::clamp(j - 1, 0, n - 4);
  int a = j - s;  // interval position within the stencil: 0, 1 or 2
  const double f0 = smp[s], f1 = smp[s + 1], f2 = smp[s + 2], f3 = smp[s + 3];
  switch (a) {
    case 0: return h * (9.0 * f0 + 19.0 * f1 - 5.0 * f2 + f3) / 24.0;
    case 1: return h * (-f0 + 13.0 * f1 + 13.0 * f2 - f3) / 24.0;
    default: return h * (f0 - 5.0 * f1 + 19.0 * f2 + 9.0 * f3) / 24.0;
  }
}

}  // namespace

double integrate_segment(std::span<const double> samples, const UniformGrid& grid, int i0, int i1) {
  const int n = grid.n;
  if (static_cast<int>(samples.size()) != n)
    throw std::invalid_argument("integrate: sample count does not match grid");
  if (i0 < 0 || i1 > n - 1 || i0 > i1) throw std::invalid_argument("integrate: bad segment");
  const int m = i1 - i0 + 1;
  const double h = grid.step();
  if (m == 1) return 0.0;
  if (m == 2) return cubic_interval(samples, h, i0, n);
  if (m == 4) return three_eighths_panel(samples, h, i0);
  if (m % 2 == 1) return simpson_run(samples, h, i0, i1);
  // even count >= 6: Simpson on the leading points, 3/8 panel on the last three intervals
  return simpson_run(samples, h, i0, i1 - 3) + three_eighths_panel(samples, h, i1 - 3);
}

double integrate(std::span<const double> samples, const UniformGrid& grid) {
  return integrate_segment(samples, grid, 0, grid.n - 1);
}

std::pair<double, double> integrate_split(std::span<const double> samples,
                                          const UniformGrid& grid, int split_index) {
  if (split_index < 0 || split_index > grid.n - 1)
    throw std::invalid_argument("integrate_split: split index out of range");
  return {integrate_segment(samples, grid, 0, split_index),
          integrate_segment(samples, grid, split_index, grid.n - 1)};
}

double integrate_function(const std::function<double(double)>& f, double a, double b, int n) {
  UniformGrid g(a, b, n);
  std::vector<double> s(n);
  for (int i = 0; i < n; ++i) s[i] = f(g.node(i));
  return integrate(s, g);
}

double l2_norm(const std::function<double(double)>& f, double a, double b, int n) {
  double v = integrate_function([&](double x) { double y = f(x); return y * y; }, a, b, n);
  return std::sqrt(std::max(0.0, v));
}

double l2_norm_2d(const std::function<double(double, double)>& f,
                  const UniformGrid& xgrid, const UniformGrid& tgrid) {
  std::vector<double> inner(tgrid.n);
  std::vector<double> row(xgrid.n);
  for (int j = 0; j < tgrid.n; ++j) {
    const double t = tgrid.node(j);
    for (int i = 0; i < xgrid.n; ++i) {
      double v = f(xgrid.node(i), t);
      row[i] = v * v;
    }
    inner[j] = integrate(row, xgrid);
  }
  return std::sqrt(std::max(0.0, integrate(inner, tgrid)));
}

}  // namespace nlwave::quadrature
