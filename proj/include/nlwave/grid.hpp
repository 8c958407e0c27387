#pragma once

#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <vector>

namespace nlwave {

/// Uniform grid of n nodes on [a, b], nodes t_j = a + j*step.
struct UniformGrid {
  double a = 0.0;
  double b = 1.0;
  int n = 2;

  UniformGrid() = default;
  UniformGrid(double a, double b, int n) : a(a), b(b), n(n) {
    if (n < 2) throw std::invalid_argument("UniformGrid: need at least 2 points");
    if (!(b > a)) throw std::invalid_argument("UniformGrid: need b > a");
  }

  double step() const { return (b - a) / (n - 1); }
  double node(int j) const { return a + j * step(); }

  bool operator==(const UniformGrid& o) const { return a == o.a && b == o.b && n == o.n; }
};

/// Real-valued function carried as samples on a uniform time grid.
struct TimeGridFunction {
  UniformGrid grid;
  std::vector<double> values;

  TimeGridFunction() = default;
  TimeGridFunction(UniformGrid g, std::vector<double> v) : grid(g), values(std::move(v)) {
    if (static_cast<int>(values.size()) != grid.n)
      throw std::invalid_argument("TimeGridFunction: sample count does not match grid");
  }

  static TimeGridFunction zeros(const UniformGrid& g) {
    return TimeGridFunction(g, std::vector<double>(g.n, 0.0));
  }

  double sup_norm() const {
    double m = 0.0;
    for (double v : values) m = std::max(m, std::fabs(v));
    return m;
  }
};

inline double sup_norm(const std::vector<double>& v) {
  double m = 0.0;
  for (double x : v) m = std::max(m, std::fabs(x));
  return m;
}

}  // namespace nlwave
