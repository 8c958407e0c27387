#pragma once

#include <span>
#include <string>
#include <vector>

#include "nlwave/basis.hpp"
#include "nlwave/grid.hpp"
#include "nlwave/kernels.hpp"
#include "nlwave/problem.hpp"

namespace nlwave {

/// Data of a problem instance expanded against the dual family: phi_k, psi_k,
/// f_k(t_j) for flat k = 0..2K, plus h, h'' and f(1/2, .) on the time grid.
struct DataCoefficients {
  UniformGrid tgrid;
  int K = 0;
  std::vector<double> phi;                  // 2K+1
  std::vector<double> psi;                  // 2K+1
  std::vector<std::vector<double>> f;       // [2K+1][tgrid.n]
  std::vector<double> h;                    // tgrid.n (all zero when h absent)
  std::vector<double> h2;                   // h''
  std::vector<double> f_mid;                // f(1/2, t_j)
  bool has_h = false;
  std::vector<std::string> warnings;
};

/// Truncated mode coefficients u_k(t_j), flat k = 0..2K.
struct SpectralState {
  UniformGrid tgrid;
  int K = 0;
  std::vector<std::vector<double>> modes;  // [2K+1][tgrid.n]

  static SpectralState zeros(const UniformGrid& g, int K);
  double at(int flat, int j) const { return modes[flat][j]; }
};

/// How the odd->even coupling of the even-mode representation is formed.
///   ode_consistent — exact Duhamel coupling -2 p lambda_k Int G_k(t,tau)
///                    u_{2k-1}(tau) dtau; the output satisfies the mode ODE.
///   as_printed     — the long coupling braces and the unscaled double kernel
///                    integral taken verbatim; kept for comparison.
enum class CouplingMode { ode_consistent, as_printed };

/// Expand problem data. The h(t) != 0 guard uses eps_h; spatial quadrature on
/// nx nodes (resolution warnings are collected into the result).
DataCoefficients extract_data(const ProblemData& problem, int K, int nx, const UniformGrid& tgrid,
                              double eps_h = 1e-8);

/// Zero mode: u0(t) = phi0/(1+d1) + (t - d1(T-t))/((1+d1)(1+d2)) psi0
///            + Int_0^T G0(t,tau) F0(tau) dtau.
std::vector<double> solve_zero_mode(double phi0, double psi0, std::span<const double> F0,
                                    const UniformGrid& grid, const NonlocalParams& np);

/// Odd mode 2k-1: homogeneous part over rho_k plus the G_k kernel integral.
std::vector<double> solve_odd_mode(int k, double phi_odd, double psi_odd,
                                   std::span<const double> F_odd, const UniformGrid& grid,
                                   const NonlocalParams& np);

/// Even mode 2k: mirror of the odd representation with even data, plus the
/// G_k integral of F_{2k}, plus the coupling contribution of mode 2k-1.
std::vector<double> solve_even_mode(int k, double phi_even, double psi_even, double phi_odd,
                                    double psi_odd, std::span<const double> F_even,
                                    std::span<const double> F_odd, const UniformGrid& grid,
                                    const NonlocalParams& np, const BasisParams& bp,
                                    CouplingMode mode = CouplingMode::ode_consistent);

/// F_k(t_j) = a(t_j) u_k(t_j) + f_k(t_j) for all modes.
std::vector<std::vector<double>> assemble_sources(const SpectralState& state,
                                                  std::span<const double> a,
                                                  const DataCoefficients& data);

/// Pointwise field u(x_i, t_j) = sum_k u_k(t_j) X_k(x_i), x-major layout.
struct Field {
  UniformGrid xgrid;
  UniformGrid tgrid;
  std::vector<double> values;  // [xgrid.n * tgrid.n]
  double at(int ix, int jt) const { return values[ix * tgrid.n + jt]; }
};

Field synthesize_field(const SpectralState& state, const BasisParams& bp,
                       const UniformGrid& xgrid);

/// Finite-difference residual of the mode ODE system plus the nonlocal
/// condition defects, per mode. Central 2nd-order stencils inside, one-sided
/// 2nd-order stencils for the endpoint derivatives.
struct OdeResidualReport {
  std::vector<double> ode;           // max_j |D2 u_k + lambda_k^2 u_k - rhs_k|
  std::vector<double> cond_value;    // |u_k(0) + d1 u_k(T) - phi_k|
  std::vector<double> cond_deriv;    // |u_k'(0) + d2 u_k'(T) - psi_k|
  double max_ode = 0.0;
  double max_cond = 0.0;
};

OdeResidualReport mode_ode_residual(const SpectralState& state,
                                    const std::vector<std::vector<double>>& F,
                                    const NonlocalParams& np, const BasisParams& bp,
                                    std::span<const double> phi, std::span<const double> psi);

}  // namespace nlwave
