#include "nlwave/spectral.hpp"

#include <cmath>
#include <limits>

#include "nlwave/quadrature.hpp"

namespace nlwave {

SpectralState SpectralState::zeros(const UniformGrid& g, int K) {
  SpectralState s;
  s.tgrid = g;
  s.K = K;
  s.modes.assign(2 * K + 1, std::vector<double>(g.n, 0.0));
  return s;
}

namespace {

// Trig tables for mode k on the shared time grid; green_k(t_j, tau_i) becomes
// pure arithmetic in the O(n^2) kernel sweeps.
struct OscTables {
  double lam, d1, d2, d12, inv_rho_lam, inv_lam;
  std::vector<double> st, ct;    // sin/cos(lam * t_i)
  std::vector<double> sTt, cTt;  // sin/cos(lam * (T - t_i))

  OscTables(int k, const UniformGrid& g, const NonlocalParams& np) {
    lam = angular_frequency(k);
    d1 = np.delta1;
    d2 = np.delta2;
    d12 = np.delta1 * np.delta2;
    inv_rho_lam = 1.0 / (rho_k(k, np) * lam);
    inv_lam = 1.0 / lam;
    st.resize(g.n);
    ct.resize(g.n);
    sTt.resize(g.n);
    cTt.resize(g.n);
    for (int i = 0; i < g.n; ++i) {
      const double t = g.node(i);
      st[i] = std::sin(lam * t);
      ct[i] = std::cos(lam * t);
      sTt[i] = std::sin(lam * (np.T - t));
      cTt[i] = std::cos(lam * (np.T - t));
    }
  }

  // the tau <= t branch adds sin(lam(t-tau))/lam on top of the common part
  double above(int j, int i) const {  // branch valid for tau >= t_j
    const double s_tmtau = st[j] * ct[i] - ct[j] * st[i];
    return -inv_rho_lam * (d1 * sTt[i] * ct[j] + d2 * cTt[i] * st[j] + d12 * s_tmtau);
  }
  double below(int j, int i) const {  // branch valid for tau <= t_j
    const double s_tmtau = st[j] * ct[i] - ct[j] * st[i];
    return -inv_rho_lam * (d1 * sTt[i] * ct[j] + d2 * cTt[i] * st[j] + d12 * s_tmtau) +
           s_tmtau * inv_lam;
  }
};

struct ZeroTables {
  const UniformGrid& g;
  const NonlocalParams& np;
  double above(int j, int i) const {
    const double t = g.node(j), tau = g.node(i);
    return -(np.delta2 * t + np.delta1 * (np.T - tau) + np.delta1 * np.delta2 * (t - tau)) /
           ((1.0 + np.delta1) * (1.0 + np.delta2));
  }
  double below(int j, int i) const { return above(j, i) + (g.node(j) - g.node(i)); }
};

// out[j] = Int_0^T G(t_j, tau) F(tau) dtau, split at the kink tau = t_j.
// Each side integrates its own smooth branch extension, so the short-segment
// stencils next to the kink stay 4th order.
template <typename Kernel>
std::vector<double> kernel_integral(const Kernel& G, std::span<const double> F,
                                    const UniformGrid& grid) {
  const int n = grid.n;
  std::vector<double> out(n);
  std::vector<double> lower(n), upper(n);
  for (int j = 0; j < n; ++j) {
    for (int i = 0; i < n; ++i) {
      lower[i] = G.below(j, i) * F[i];
      upper[i] = G.above(j, i) * F[i];
    }
    out[j] = quadrature::integrate_segment(lower, grid, 0, j) +
             quadrature::integrate_segment(upper, grid, j, n - 1);
  }
  return out;
}

}  // namespace

std::vector<double> solve_zero_mode(double phi0, double psi0, std::span<const double> F0,
                                    const UniformGrid& grid, const NonlocalParams& np) {
  if (static_cast<int>(F0.size()) != grid.n)
    throw GridMismatch("solve_zero_mode: F0 does not match grid");
  const double d1 = np.delta1, d2 = np.delta2, T = np.T;
  std::vector<double> u = kernel_integral(ZeroTables{grid, np}, F0, grid);
  for (int j = 0; j < grid.n; ++j) {
    const double t = grid.node(j);
    u[j] += phi0 / (1.0 + d1) + (t - d1 * (T - t)) / ((1.0 + d1) * (1.0 + d2)) * psi0;
  }
  return u;
}

std::vector<double> solve_odd_mode(int k, double phi_odd, double psi_odd,
                                   std::span<const double> F_odd, const UniformGrid& grid,
                                   const NonlocalParams& np) {
  if (static_cast<int>(F_odd.size()) != grid.n)
    throw GridMismatch("solve_odd_mode: F does not match grid");
  const OscTables tab(k, grid, np);
  const double rho = rho_k(k, np);
  std::vector<double> u = kernel_integral(tab, F_odd, grid);
  for (int j = 0; j < grid.n; ++j) {
    u[j] += (phi_odd * (tab.ct[j] + np.delta2 * tab.cTt[j]) +
             psi_odd / tab.lam * (tab.st[j] - np.delta1 * tab.sTt[j])) /
            rho;
  }
  return u;
}

std::vector<double> solve_even_mode(int k, double phi_even, double psi_even, double phi_odd,
                                    double psi_odd, std::span<const double> F_even,
                                    std::span<const double> F_odd, const UniformGrid& grid,
                                    const NonlocalParams& np, const BasisParams& bp,
                                    CouplingMode mode) {
  if (static_cast<int>(F_even.size()) != grid.n || static_cast<int>(F_odd.size()) != grid.n)
    throw GridMismatch("solve_even_mode: sources do not match grid");
  const OscTables tab(k, grid, np);
  const double rho = rho_k(k, np);

  std::vector<double> u = kernel_integral(tab, F_even, grid);
  for (int j = 0; j < grid.n; ++j) {
    u[j] += (phi_even * (tab.ct[j] + np.delta2 * tab.cTt[j]) +
             psi_even / tab.lam * (tab.st[j] - np.delta1 * tab.sTt[j])) /
            rho;
  }

  if (mode == CouplingMode::ode_consistent) {
    // exact source coupling: the even ODE carries -2 p lambda_k u_{2k-1}
    std::vector<double> u_odd = solve_odd_mode(k, phi_odd, psi_odd, F_odd, grid, np);
    std::vector<double> coupled = kernel_integral(tab, u_odd, grid);
    const double factor = -2.0 * bp.p * tab.lam;
    for (int j = 0; j < grid.n; ++j) u[j] += factor * coupled[j];
    return u;
  }

  // verbatim variant: coupling braces plus the unscaled double kernel integral
  std::vector<double> inner = kernel_integral(tab, F_odd, grid);
  std::vector<double> outer = kernel_integral(tab, inner, grid);
  for (int j = 0; j < grid.n; ++j) {
    const double t = grid.node(j);
    u[j] += -phi_odd * coupling_bracket_position(k, t, np) +
            psi_odd / tab.lam * coupling_bracket_velocity(k, t, np) + outer[j];
  }
  return u;
}

std::vector<std::vector<double>> assemble_sources(const SpectralState& state,
                                                  std::span<const double> a,
                                                  const DataCoefficients& data) {
  if (!(state.tgrid == data.tgrid) || static_cast<int>(a.size()) != state.tgrid.n)
    throw GridMismatch("assemble_sources: grids disagree");
  if (state.K != data.K) throw GridMismatch("assemble_sources: truncations disagree");
  const int n = state.tgrid.n;
  std::vector<std::vector<double>> F(2 * state.K + 1, std::vector<double>(n));
  for (int flat = 0; flat <= 2 * state.K; ++flat)
    for (int j = 0; j < n; ++j) F[flat][j] = a[j] * state.modes[flat][j] + data.f[flat][j];
  return F;
}

Field synthesize_field(const SpectralState& state, const BasisParams& bp,
                       const UniformGrid& xgrid) {
  Field field;
  field.xgrid = xgrid;
  field.tgrid = state.tgrid;
  field.values.assign(static_cast<std::size_t>(xgrid.n) * state.tgrid.n, 0.0);
  for (int flat = 0; flat <= 2 * state.K; ++flat) {
    const ModeIndex m = mode_from_flat(flat);
    for (int ix = 0; ix < xgrid.n; ++ix) {
      const double Xv = basis_function(m, bp, xgrid.node(ix));
      if (Xv == 0.0) continue;
      double* row = field.values.data() + static_cast<std::size_t>(ix) * state.tgrid.n;
      const std::vector<double>& mode = state.modes[flat];
      for (int jt = 0; jt < state.tgrid.n; ++jt) row[jt] += mode[jt] * Xv;
    }
  }
  return field;
}

DataCoefficients extract_data(const ProblemData& problem, int K, int nx, const UniformGrid& tgrid,
                              double eps_h) {
  DataCoefficients data;
  data.tgrid = tgrid;
  data.K = K;

  const BasisParams& bp = problem.basis;
  if (problem.phi.symbolic()) {
    data.phi = coefficients([&](double x) { return problem.phi(x); }, K, bp, nx,
                            DualFamily::biorthogonal, &data.warnings);
  } else {
    data.phi = coefficients(problem.phi.sample_values(), problem.phi.sample_grid(), K, bp,
                            DualFamily::biorthogonal, &data.warnings);
  }
  if (problem.psi.symbolic()) {
    data.psi = coefficients([&](double x) { return problem.psi(x); }, K, bp, nx,
                            DualFamily::biorthogonal, &data.warnings);
  } else {
    data.psi = coefficients(problem.psi.sample_values(), problem.psi.sample_grid(), K, bp,
                            DualFamily::biorthogonal, &data.warnings);
  }

  // f_k(t_j): tabulate the duals once, one spatial quadrature per (k, t_j)
  UniformGrid xgrid(0.0, 1.0, nx);
  std::vector<std::vector<double>> Y(2 * K + 1, std::vector<double>(nx));
  for (int flat = 0; flat <= 2 * K; ++flat) {
    const ModeIndex m = mode_from_flat(flat);
    for (int i = 0; i < nx; ++i) Y[flat][i] = dual_function(m, bp, xgrid.node(i));
  }
  data.f.assign(2 * K + 1, std::vector<double>(tgrid.n));
  data.f_mid.resize(tgrid.n);
  std::vector<double> row(nx), integrand(nx);
  for (int j = 0; j < tgrid.n; ++j) {
    const double t = tgrid.node(j);
    for (int i = 0; i < nx; ++i) row[i] = problem.f(xgrid.node(i), t);
    for (int flat = 0; flat <= 2 * K; ++flat) {
      for (int i = 0; i < nx; ++i) integrand[i] = row[i] * Y[flat][i];
      data.f[flat][j] = quadrature::integrate(integrand, xgrid);
    }
    data.f_mid[j] = problem.f(0.5, t);
  }

  data.h.assign(tgrid.n, 0.0);
  data.h2.assign(tgrid.n, 0.0);
  if (problem.h) {
    data.has_h = true;
    const Func1D& h = *problem.h;
    Func1D h2;
    if (h.symbolic()) {
      h2 = h.derivative().derivative();
    } else {
      h2 = Func1D::from_samples(
          h.sample_grid(), fd_second_derivative(h.sample_values(), h.sample_grid().step()));
    }
    double min_abs = std::numeric_limits<double>::infinity();
    for (int j = 0; j < tgrid.n; ++j) {
      data.h[j] = h(tgrid.node(j));
      data.h2[j] = h2(tgrid.node(j));
      min_abs = std::min(min_abs, std::fabs(data.h[j]));
    }
    if (min_abs <= eps_h)
      throw HNearZero("min |h| = " + std::to_string(min_abs) + " is below the guard " +
                      std::to_string(eps_h));
  }
  return data;
}

OdeResidualReport mode_ode_residual(const SpectralState& state,
                                    const std::vector<std::vector<double>>& F,
                                    const NonlocalParams& np, const BasisParams& bp,
                                    std::span<const double> phi, std::span<const double> psi) {
  const UniformGrid& g = state.tgrid;
  if (g.n < 5) throw std::invalid_argument("mode_ode_residual: need at least 5 time nodes");
  const int n = g.n;
  const double h = g.step();
  OdeResidualReport rep;
  const int count = 2 * state.K + 1;
  rep.ode.assign(count, 0.0);
  rep.cond_value.assign(count, 0.0);
  rep.cond_deriv.assign(count, 0.0);

  for (int flat = 0; flat < count; ++flat) {
    const ModeIndex m = mode_from_flat(flat);
    const std::vector<double>& u = state.modes[flat];
    const double lam2 = (m.parity == Parity::zero) ? 0.0 : std::pow(angular_frequency(m.k), 2);
    double worst = 0.0;
    for (int j = 1; j < n - 1; ++j) {
      const double d2u = (u[j - 1] - 2.0 * u[j] + u[j + 1]) / (h * h);
      double rhs = F[flat][j];
      if (m.parity == Parity::even)
        rhs -= 2.0 * bp.p * angular_frequency(m.k) * state.modes[flat - 1][j];
      worst = std::max(worst, std::fabs(d2u + lam2 * u[j] - rhs));
    }
    rep.ode[flat] = worst;

    const double du0 = (-3.0 * u[0] + 4.0 * u[1] - u[2]) / (2.0 * h);
    const double duT = (3.0 * u[n - 1] - 4.0 * u[n - 2] + u[n - 3]) / (2.0 * h);
    rep.cond_value[flat] = std::fabs(u[0] + np.delta1 * u[n - 1] - phi[flat]);
    rep.cond_deriv[flat] = std::fabs(du0 + np.delta2 * duT - psi[flat]);
    rep.max_ode = std::max(rep.max_ode, rep.ode[flat]);
    rep.max_cond = std::max(rep.max_cond, std::max(rep.cond_value[flat], rep.cond_deriv[flat]));
  }
  return rep;
}

}  // namespace nlwave
