#include "nlwave/problem.hpp"

#include <algorithm>
#include <cmath>

namespace nlwave {

std::vector<double> fd_derivative(const std::vector<double>& v, double step) {
  const int n = static_cast<int>(v.size());
  if (n < 3) throw std::invalid_argument("fd_derivative: need at least 3 samples");
  std::vector<double> d(n);
  d[0] = (-3.0 * v[0] + 4.0 * v[1] - v[2]) / (2.0 * step);
  for (int i = 1; i < n - 1; ++i) d[i] = (v[i + 1] - v[i - 1]) / (2.0 * step);
  d[n - 1] = (3.0 * v[n - 1] - 4.0 * v[n - 2] + v[n - 3]) / (2.0 * step);
  return d;
}

std::vector<double> fd_second_derivative(const std::vector<double>& v, double step) {
  const int n = static_cast<int>(v.size());
  if (n < 4) throw std::invalid_argument("fd_second_derivative: need at least 4 samples");
  std::vector<double> d(n);
  d[0] = (2.0 * v[0] - 5.0 * v[1] + 4.0 * v[2] - v[3]) / (step * step);
  for (int i = 1; i < n - 1; ++i) d[i] = (v[i - 1] - 2.0 * v[i] + v[i + 1]) / (step * step);
  d[n - 1] = (2.0 * v[n - 1] - 5.0 * v[n - 2] + 4.0 * v[n - 3] - v[n - 4]) / (step * step);
  return d;
}

Func1D Func1D::from_expr(Expr e, char var) {
  if (var != 'x' && var != 't') throw std::invalid_argument("Func1D: variable must be x or t");
  Func1D f;
  f.expr_ = std::move(e);
  f.var_ = var;
  return f;
}

Func1D Func1D::from_samples(UniformGrid grid, std::vector<double> values) {
  if (static_cast<int>(values.size()) != grid.n)
    throw GridMismatch("Func1D: sample count does not match grid");
  Func1D f;
  f.grid_ = grid;
  f.values_ = std::move(values);
  f.sampled_ = true;
  return f;
}

const Expr& Func1D::expression() const {
  if (!expr_.valid()) throw std::invalid_argument("Func1D: sampled function has no expression");
  return expr_;
}

double Func1D::operator()(double v) const {
  if (!sampled_) {
    Bindings b;
    (var_ == 'x' ? b.x : b.t) = v;
    return expr_.eval(b);
  }
  // linear interpolation, clamped to the sample range
  const double s = grid_.step();
  double pos = (v - grid_.a) / s;
  pos = std::clamp(pos, 0.0, static_cast<double>(grid_.n - 1));
  int i = std::min(static_cast<int>(pos), grid_.n - 2);
  double w = pos - i;
  return values_[i] * (1.0 - w) + values_[i + 1] * w;
}

Func1D Func1D::derivative() const {
  if (!sampled_) return from_expr(expr_.diff(var_), var_);
  return from_samples(grid_, fd_derivative(values_, grid_.step()));
}

Func2D Func2D::from_expr(Expr e) {
  Func2D f;
  f.expr_ = std::move(e);
  return f;
}

Func2D Func2D::from_samples(UniformGrid xgrid, UniformGrid tgrid, std::vector<double> values) {
  if (static_cast<int>(values.size()) != xgrid.n * tgrid.n)
    throw GridMismatch("Func2D: sample count does not match the tensor grid");
  Func2D f;
  f.xgrid_ = xgrid;
  f.tgrid_ = tgrid;
  f.values_ = std::move(values);
  f.sampled_ = true;
  return f;
}

const Expr& Func2D::expression() const {
  if (!expr_.valid()) throw std::invalid_argument("Func2D: sampled function has no expression");
  return expr_;
}

double Func2D::operator()(double x, double t) const {
  if (!sampled_) return expr_.eval(Bindings::at(x, t));
  const double sx = xgrid_.step(), st = tgrid_.step();
  double px = std::clamp((x - xgrid_.a) / sx, 0.0, static_cast<double>(xgrid_.n - 1));
  double pt = std::clamp((t - tgrid_.a) / st, 0.0, static_cast<double>(tgrid_.n - 1));
  int i = std::min(static_cast<int>(px), xgrid_.n - 2);
  int j = std::min(static_cast<int>(pt), tgrid_.n - 2);
  double wx = px - i, wt = pt - j;
  auto at = [&](int ix, int jt) { return values_[ix * tgrid_.n + jt]; };
  return at(i, j) * (1 - wx) * (1 - wt) + at(i + 1, j) * wx * (1 - wt) +
         at(i, j + 1) * (1 - wx) * wt + at(i + 1, j + 1) * wx * wt;
}

Func2D Func2D::derivative_x() const {
  if (!sampled_) return from_expr(expr_.diff('x'));
  std::vector<double> d(values_.size());
  std::vector<double> col(xgrid_.n);
  for (int j = 0; j < tgrid_.n; ++j) {
    for (int i = 0; i < xgrid_.n; ++i) col[i] = values_[i * tgrid_.n + j];
    std::vector<double> dc = fd_derivative(col, xgrid_.step());
    for (int i = 0; i < xgrid_.n; ++i) d[i * tgrid_.n + j] = dc[i];
  }
  return from_samples(xgrid_, tgrid_, std::move(d));
}

}  // namespace nlwave
