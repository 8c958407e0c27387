#pragma once

#include <optional>
#include <vector>

#include "nlwave/basis.hpp"
#include "nlwave/expr.hpp"
#include "nlwave/grid.hpp"
#include "nlwave/kernels.hpp"

namespace nlwave {

/// Scalar function of one variable, carried either as a symbolic expression
/// (exact derivatives) or as uniform samples (O(h^2) finite differences,
/// linear interpolation between nodes).
class Func1D {
 public:
  Func1D() = default;

  static Func1D from_expr(Expr e, char var);
  static Func1D from_samples(UniformGrid grid, std::vector<double> values);

  double operator()(double v) const;
  Func1D derivative() const;

  bool symbolic() const { return expr_.valid(); }
  const Expr& expression() const;
  char var() const { return var_; }
  const UniformGrid& sample_grid() const { return grid_; }
  const std::vector<double>& sample_values() const { return values_; }

 private:
  Expr expr_;
  char var_ = 'x';
  UniformGrid grid_;
  std::vector<double> values_;
  bool sampled_ = false;
};

/// Scalar function of (x, t), symbolic or sampled on a tensor grid
/// (values in x-major order: values[ix * tgrid.n + jt]).
class Func2D {
 public:
  Func2D() = default;

  static Func2D from_expr(Expr e);
  static Func2D from_samples(UniformGrid xgrid, UniformGrid tgrid, std::vector<double> values);

  double operator()(double x, double t) const;
  Func2D derivative_x() const;

  bool symbolic() const { return expr_.valid(); }
  const Expr& expression() const;

 private:
  Expr expr_;
  UniformGrid xgrid_, tgrid_;
  std::vector<double> values_;
  bool sampled_ = false;
};

/// One inverse-problem instance: source f(x,t), nonlocal initial data
/// phi(x), psi(x), observation h(t), the boundary coupling beta and the
/// nonlocal weights (delta1, delta2, T).  h is optional so the same carrier
/// serves forward-only runs.
struct ProblemData {
  BasisParams basis;
  NonlocalParams nonlocal;
  Func2D f;
  Func1D phi;
  Func1D psi;
  std::optional<Func1D> h;

  const Func1D& observation() const {
    if (!h) throw std::invalid_argument("problem has no observation h(t)");
    return *h;
  }
};

/// Finite-difference derivative samples of a sampled function
/// (2nd order: central interior, one-sided at the ends).
std::vector<double> fd_derivative(const std::vector<double>& v, double step);

/// Direct second-difference samples, O(h^2) including the one-sided ends
/// (chaining fd_derivative twice loses an order at the boundary).
std::vector<double> fd_second_derivative(const std::vector<double>& v, double step);

}  // namespace nlwave
