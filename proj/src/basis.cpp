#include "nlwave/basis.hpp"

#include <cmath>
#include <numbers>

#include "nlwave/quadrature.hpp"

namespace nlwave {

BasisParams make_basis_params(double beta) {
  if (std::fabs(beta - 1.0) < 1e-12 || std::fabs(beta + 1.0) < 1e-12)
    throw DegenerateBeta("beta must differ from +-1: p = (1-beta)/(1+beta) degenerates");
  return {beta, (1.0 - beta) / (1.0 + beta), beta / (1.0 + beta)};
}

ModeIndex mode_from_flat(int flat) {
  if (flat < 0) throw std::invalid_argument("mode_from_flat: negative index");
  if (flat == 0) return {Parity::zero, 0};
  if (flat % 2 == 1) return {Parity::odd, (flat + 1) / 2};
  return {Parity::even, flat / 2};
}

int flat_index(ModeIndex m) {
  switch (m.parity) {
    case Parity::zero: return 0;
    case Parity::odd: return 2 * m.k - 1;
    case Parity::even: return 2 * m.k;
  }
  return 0;
}

double angular_frequency(int k) {
  if (k < 1) throw std::invalid_argument("angular_frequency: k must be >= 1");
  return 2.0 * k * std::numbers::pi;
}

double basis_function(ModeIndex m, const BasisParams& bp, double x) {
  switch (m.parity) {
    case Parity::zero: return bp.p * x + bp.q;
    case Parity::odd: return (bp.p * x + bp.q) * std::cos(angular_frequency(m.k) * x);
    case Parity::even: return std::sin(angular_frequency(m.k) * x);
  }
  return 0.0;
}

Derivs basis_derivatives(ModeIndex m, const BasisParams& bp, double x) {
  switch (m.parity) {
    case Parity::zero: return {bp.p * x + bp.q, bp.p, 0.0};
    case Parity::odd: {
      const double lam = angular_frequency(m.k);
      const double lin = bp.p * x + bp.q;
      const double c = std::cos(lam * x), s = std::sin(lam * x);
      return {lin * c, bp.p * c - lam * lin * s, -2.0 * bp.p * lam * s - lam * lam * lin * c};
    }
    case Parity::even: {
      const double lam = angular_frequency(m.k);
      const double c = std::cos(lam * x), s = std::sin(lam * x);
      return {s, lam * c, -lam * lam * s};
    }
  }
  return {0.0, 0.0, 0.0};
}

double dual_function(ModeIndex m, const BasisParams& bp, double x, DualFamily family) {
  if (m.parity == Parity::zero) return 2.0;
  const double lam = angular_frequency(m.k);
  if (family == DualFamily::biorthogonal) {
    if (m.parity == Parity::odd) return 4.0 * std::cos(lam * x);
    return 4.0 * (1.0 - bp.q - bp.p * x) * std::sin(lam * x);
  }
  if (m.parity == Parity::odd) return 4.0 * std::sin(lam * x);
  return bp.q * (1.0 - bp.q - bp.p * x) * std::cos(lam * x);
}

int default_quad_points(int K) {
  int n = std::max(513, 16 * K + 1);
  return (n % 2 == 0) ? n + 1 : n;
}

bool quadrature_resolution_ok(int K, int quad_points) { return quad_points >= 8 * K; }

namespace {

void check_family_admissible(int K, const BasisParams& bp, DualFamily family) {
  if (family == DualFamily::as_printed && K >= 1 && std::fabs(bp.beta) < 1e-14)
    throw DegenerateBeta(
        "as_printed dual family: even duals vanish identically for beta = 0; "
        "use a nonzero beta or the biorthogonal family");
}

void warn_resolution(int K, int quad_points, std::vector<std::string>* warnings) {
  if (warnings && !quadrature_resolution_ok(K, quad_points))
    warnings->push_back("QuadratureResolution: " + std::to_string(quad_points) +
                        " points is coarse for truncation K=" + std::to_string(K) +
                        " (want >= " + std::to_string(8 * K) + ")");
}

std::vector<double> extract(const std::vector<double>& samples, const UniformGrid& grid, int K,
                            const BasisParams& bp, DualFamily family) {
  std::vector<double> out(2 * K + 1);
  std::vector<double> integrand(grid.n);
  for (int flat = 0; flat <= 2 * K; ++flat) {
    const ModeIndex m = mode_from_flat(flat);
    for (int i = 0; i < grid.n; ++i)
      integrand[i] = samples[i] * dual_function(m, bp, grid.node(i), family);
    out[flat] = quadrature::integrate(integrand, grid);
  }
  return out;
}

}  // namespace

std::vector<double> coefficients(const std::function<double(double)>& v, int K,
                                 const BasisParams& bp, int quad_points, DualFamily family,
                                 std::vector<std::string>* warnings) {
  if (K < 0) throw std::invalid_argument("coefficients: K must be >= 0");
  check_family_admissible(K, bp, family);
  warn_resolution(K, quad_points, warnings);
  UniformGrid grid(0.0, 1.0, quad_points);
  std::vector<double> samples(grid.n);
  for (int i = 0; i < grid.n; ++i) samples[i] = v(grid.node(i));
  return extract(samples, grid, K, bp, family);
}

std::vector<double> coefficients(std::span<const double> samples, const UniformGrid& grid, int K,
                                 const BasisParams& bp, DualFamily family,
                                 std::vector<std::string>* warnings) {
  if (K < 0) throw std::invalid_argument("coefficients: K must be >= 0");
  if (static_cast<int>(samples.size()) != grid.n)
    throw GridMismatch("coefficients: sample count does not match grid");
  check_family_admissible(K, bp, family);
  warn_resolution(K, grid.n, warnings);
  std::vector<double> copy(samples.begin(), samples.end());
  return extract(copy, grid, K, bp, family);
}

double synthesize(std::span<const double> coeffs, const BasisParams& bp, double x) {
  double acc = 0.0;
  for (int flat = 0; flat < static_cast<int>(coeffs.size()); ++flat)
    acc += coeffs[flat] * basis_function(mode_from_flat(flat), bp, x);
  return acc;
}

double biorthogonality_defect(int K, const BasisParams& bp, int quad_points, DualFamily family) {
  UniformGrid grid(0.0, 1.0, quad_points);
  const int count = 2 * K + 1;
  // tabulate both families once, then pairwise quadrature
  std::vector<std::vector<double>> X(count, std::vector<double>(grid.n));
  std::vector<std::vector<double>> Y(count, std::vector<double>(grid.n));
  for (int flat = 0; flat < count; ++flat) {
    const ModeIndex m = mode_from_flat(flat);
    for (int i = 0; i < grid.n; ++i) {
      X[flat][i] = basis_function(m, bp, grid.node(i));
      Y[flat][i] = dual_function(m, bp, grid.node(i), family);
    }
  }
  double worst = 0.0;
  std::vector<double> integrand(grid.n);
  for (int j = 0; j < count; ++j)
    for (int k = 0; k < count; ++k) {
      for (int i = 0; i < grid.n; ++i) integrand[i] = X[j][i] * Y[k][i];
      const double v = quadrature::integrate(integrand, grid);
      worst = std::max(worst, std::fabs(v - (j == k ? 1.0 : 0.0)));
    }
  return worst;
}

}  // namespace nlwave
