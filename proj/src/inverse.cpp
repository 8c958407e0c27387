#include "nlwave/inverse.hpp"

#include <atomic>
#include <cmath>
#include <thread>

#include "nlwave/quadrature.hpp"

namespace nlwave {

Iterate Iterate::zeros(const UniformGrid& g, int K) {
  return {SpectralState::zeros(g, K), TimeGridFunction::zeros(g)};
}

double iterate_norm(const Iterate& z) { return iterate_norm(z.state, z.a.values); }

double iterate_distance(const Iterate& z1, const Iterate& z2) {
  return iterate_distance(z1.state, z1.a.values, z2.state, z2.a.values);
}

namespace {

// run fn(k) for k = 1..K on the requested number of threads
void parallel_modes(int K, int threads, const std::function<void(int)>& fn) {
  if (threads <= 1 || K <= 1) {
    for (int k = 1; k <= K; ++k) fn(k);
    return;
  }
  std::vector<std::thread> pool;
  std::atomic<int> next{1};
  const int workers = std::min(threads, K);
  pool.reserve(workers);
  for (int w = 0; w < workers; ++w)
    pool.emplace_back([&] {
      for (;;) {
        const int k = next.fetch_add(1);
        if (k > K) return;
        fn(k);
      }
    });
  for (std::thread& th : pool) th.join();
}

}  // namespace

Iterate apply_picard_map(const Iterate& z, const DataCoefficients& data, const NonlocalParams& np,
                         const BasisParams& bp, CouplingMode mode, int threads,
                         double* tail_ratio) {
  const UniformGrid& g = data.tgrid;
  if (!(z.state.tgrid == g) || !(z.a.grid == g))
    throw GridMismatch("apply_picard_map: iterate does not live on the data grid");
  const int K = data.K;

  std::vector<std::vector<double>> F = assemble_sources(z.state, z.a.values, data);

  SpectralState next = SpectralState::zeros(g, K);
  next.modes[0] = solve_zero_mode(data.phi[0], data.psi[0], F[0], g, np);
  parallel_modes(K, threads, [&](int k) {
    next.modes[2 * k - 1] = solve_odd_mode(k, data.phi[2 * k - 1], data.psi[2 * k - 1],
                                           F[2 * k - 1], g, np);
    next.modes[2 * k] = solve_even_mode(k, data.phi[2 * k], data.psi[2 * k], data.phi[2 * k - 1],
                                        data.psi[2 * k - 1], F[2 * k], F[2 * k - 1], g, np, bp,
                                        mode);
  });

  // coefficient update from the observation identity, using the fresh odd modes
  TimeGridFunction a_next = TimeGridFunction::zeros(g);
  if (data.has_h) {
    double sum_sup = 0.0, last_sup = 0.0;
    for (int j = 0; j < g.n; ++j) {
      double sum = 0.0, last = 0.0;
      for (int k = 1; k <= K; ++k) {
        const double lam = angular_frequency(k);
        last = (k % 2 ? -1.0 : 1.0) * lam * lam * next.modes[2 * k - 1][j];
        sum += last;
      }
      a_next.values[j] = (data.h2[j] - data.f_mid[j] + 0.5 * sum) / data.h[j];
      sum_sup = std::max(sum_sup, std::fabs(0.5 * sum));
      last_sup = std::max(last_sup, std::fabs(0.5 * last));
    }
    if (tail_ratio) *tail_ratio = last_sup / std::max(sum_sup, 1e-300);
  } else if (tail_ratio) {
    *tail_ratio = 0.0;
  }
  return {std::move(next), std::move(a_next)};
}

SolveResult fixed_point_solve(const DataCoefficients& data, const NonlocalParams& np,
                              const BasisParams& bp, const SolveOptions& opts) {
  const UniformGrid& g = data.tgrid;
  SolveResult res;
  res.warnings = data.warnings;

  Iterate z = Iterate::zeros(g, data.K);
  switch (opts.init) {
    case SolveOptions::Init::zero: break;
    case SolveOptions::Init::data_only:
      z = apply_picard_map(z, data, np, bp, opts.mode, opts.threads);
      break;
    case SolveOptions::Init::custom:
      if (!opts.initial) throw std::invalid_argument("custom init requested without an iterate");
      z = *opts.initial;
      break;
  }

  bool escaped = false;
  for (int it = 1; it <= opts.max_iter; ++it) {
    double tail = 0.0;
    Iterate z_next = apply_picard_map(z, data, np, bp, opts.mode, opts.threads, &tail);
    const double delta = iterate_distance(z_next, z);
    res.history.push_back(delta);
    res.a_tail_ratio = tail;
    res.iterations = it;
    if (opts.ball_radius && !escaped && iterate_norm(z_next) > *opts.ball_radius) {
      escaped = true;
      res.warnings.push_back("BallEscape: iterate norm " + std::to_string(iterate_norm(z_next)) +
                             " left the certified ball of radius " +
                             std::to_string(*opts.ball_radius));
    }
    z = std::move(z_next);
    if (delta <= opts.tol) {
      res.converged = true;
      break;
    }
  }
  for (std::size_t i = 0; i + 1 < res.history.size(); ++i)
    res.contraction_ratios.push_back(res.history[i + 1] /
                                     std::max(res.history[i], 1e-300));
  res.solution = std::move(z);
  if (!res.converged)
    throw NonConvergence("fixed_point_solve: no convergence in " +
                             std::to_string(opts.max_iter) + " iterations",
                         res.iterations, res.history.empty() ? 0.0 : res.history.back());
  return res;
}

ForwardResult forward_solve(const DataCoefficients& data, std::span<const double> a_known,
                            const NonlocalParams& np, const BasisParams& bp,
                            const SolveOptions& opts) {
  const UniformGrid& g = data.tgrid;
  if (static_cast<int>(a_known.size()) != g.n)
    throw GridMismatch("forward_solve: coefficient samples do not match the grid");
  ForwardResult res;
  TimeGridFunction a(g, std::vector<double>(a_known.begin(), a_known.end()));
  Iterate z{SpectralState::zeros(g, data.K), a};
  for (int it = 1; it <= opts.max_iter; ++it) {
    Iterate z_next = apply_picard_map(z, data, np, bp, opts.mode, opts.threads);
    z_next.a = a;  // the coefficient stays frozen
    const double delta = iterate_distance(z_next, z);
    res.history.push_back(delta);
    res.iterations = it;
    z = std::move(z_next);
    if (delta <= opts.tol) {
      res.converged = true;
      break;
    }
  }
  res.state = std::move(z.state);
  if (!res.converged)
    throw NonConvergence("forward_solve: no convergence in " + std::to_string(opts.max_iter) +
                             " iterations",
                         res.iterations, res.history.empty() ? 0.0 : res.history.back());
  return res;
}

Residuals residual_report(const Iterate& z, const ProblemData& problem, int nx) {
  const UniformGrid& tg = z.state.tgrid;
  const UniformGrid xg(0.0, 1.0, nx);
  const BasisParams& bp = problem.basis;
  const NonlocalParams& np = problem.nonlocal;
  const int n = tg.n;
  const double ht = tg.step();
  const int K = z.state.K;

  // field and its analytic x-derivatives on the grid
  Field u = synthesize_field(z.state, bp, xg);
  std::vector<double> uxx(u.values.size(), 0.0), ux0(n, 0.0), ux1(n, 0.0);
  for (int flat = 0; flat <= 2 * K; ++flat) {
    const ModeIndex m = mode_from_flat(flat);
    const Derivs at0 = basis_derivatives(m, bp, 0.0);
    const Derivs at1 = basis_derivatives(m, bp, 1.0);
    for (int jt = 0; jt < n; ++jt) {
      ux0[jt] += z.state.modes[flat][jt] * at0.d1;
      ux1[jt] += z.state.modes[flat][jt] * at1.d1;
    }
    for (int ix = 0; ix < xg.n; ++ix) {
      const double d2 = basis_derivatives(m, bp, xg.node(ix)).d2;
      if (d2 == 0.0) continue;
      for (int jt = 0; jt < n; ++jt)
        uxx[static_cast<std::size_t>(ix) * n + jt] += z.state.modes[flat][jt] * d2;
    }
  }

  Residuals r;
  // PDE residual: u_tt by central differences on interior time nodes
  for (int ix = 0; ix < xg.n; ++ix) {
    const double x = xg.node(ix);
    const double* row = u.values.data() + static_cast<std::size_t>(ix) * n;
    const double* rxx = uxx.data() + static_cast<std::size_t>(ix) * n;
    for (int jt = 1; jt < n - 1; ++jt) {
      const double t = tg.node(jt);
      const double utt = (row[jt - 1] - 2.0 * row[jt] + row[jt + 1]) / (ht * ht);
      const double res = utt - rxx[jt] - z.a.values[jt] * row[jt] - problem.f(x, t);
      r.pde = std::max(r.pde, std::fabs(res));
    }
  }

  // integral, observation and beta-coupling defects over time
  std::vector<double> column(xg.n);
  const int mid = (xg.n - 1) / 2;  // nx odd: node at x = 1/2
  for (int jt = 0; jt < n; ++jt) {
    for (int ix = 0; ix < xg.n; ++ix) column[ix] = u.at(ix, jt);
    r.integral = std::max(r.integral, std::fabs(quadrature::integrate(column, xg)));
    if (problem.h)
      r.overdet = std::max(r.overdet,
                           std::fabs(u.at(mid, jt) - problem.observation()(tg.node(jt))));
    r.bc_value = std::max(r.bc_value, std::fabs(u.at(0, jt) - bp.beta * u.at(xg.n - 1, jt)));
    r.bc_flux = std::max(r.bc_flux, std::fabs(ux0[jt] - ux1[jt]));
  }

  // nonlocal initial conditions, u_t by one-sided 2nd-order stencils
  for (int ix = 0; ix < xg.n; ++ix) {
    const double* row = u.values.data() + static_cast<std::size_t>(ix) * n;
    const double x = xg.node(ix);
    const double ut0 = (-3.0 * row[0] + 4.0 * row[1] - row[2]) / (2.0 * ht);
    const double utT = (3.0 * row[n - 1] - 4.0 * row[n - 2] + row[n - 3]) / (2.0 * ht);
    r.ic_value = std::max(
        r.ic_value, std::fabs(row[0] + np.delta1 * row[n - 1] - problem.phi(x)));
    r.ic_deriv = std::max(r.ic_deriv, std::fabs(ut0 + np.delta2 * utT - problem.psi(x)));
  }
  return r;
}

}  // namespace nlwave
