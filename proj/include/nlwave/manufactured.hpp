#pragma once

#include <string>
#include <vector>

#include "nlwave/expr.hpp"
#include "nlwave/inverse.hpp"
#include "nlwave/problem.hpp"

namespace nlwave {

/// One mode of a manufactured field: basis index plus amplitude g(t).
struct ManufacturedMode {
  ModeIndex index;
  Expr amplitude;  // g(t), symbolic so g', g'' exist exactly
};

/// Recipe for an instance with known exact solution
/// u*(x,t) = sum g_m(t) X_m(x), a*(t) given.
struct ManufacturedSpec {
  double beta = 3.0;
  double delta1 = 0.0;
  double delta2 = 0.0;
  double T = 0.25;
  Expr a_star;  // in t
  std::vector<ManufacturedMode> modes;
};

/// A built instance: derived data plus everything needed to evaluate truth.
struct Manufactured {
  ProblemData problem;
  ManufacturedSpec spec;
  Expr f_expr, phi_expr, psi_expr, h_expr;  // the derived data, symbolically

  /// Exact iterate sampled on a grid at truncation K.
  Iterate truth(const UniformGrid& tgrid, int K) const;
};

/// Derive (f, phi, psi, h) from the recipe:
///   f = u*_tt - u*_xx - a* u*,  phi = u*(.,0) + d1 u*(.,T),
///   psi = u*_t(.,0) + d2 u*_t(.,T),  h = u*(1/2,.).
/// Throws HIdenticallyZero when no mode contributes at x = 1/2.
Manufactured build(const ManufacturedSpec& spec);

/// Basis function as a symbolic expression in x (used by build and by tests).
Expr mode_expression(ModeIndex m, const BasisParams& bp);

struct ErrorReport {
  double a_sup = 0.0;
  double a_l2 = 0.0;
  double e_norm = 0.0;
  std::vector<double> mode_sup;  // per flat index
};

ErrorReport error_report(const Iterate& solution, const Iterate& truth);

/// Named catalog entries. T is resolved by the contraction-inequality
/// bisection when the catalog entry requests it.
std::vector<std::string> preset_names();
ManufacturedSpec make_preset(const std::string& name, int nx = 513, int nt = 257);

}  // namespace nlwave
