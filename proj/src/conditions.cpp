#include "nlwave/conditions.hpp"

#include <cmath>
#include <limits>
#include <numbers>

#include "nlwave/quadrature.hpp"

namespace nlwave {

const CheckItem* ComplianceReport::find(const std::string& name) const {
  for (const CheckItem& it : items)
    if (it.name == name) return &it;
  return nullptr;
}

namespace {

constexpr double kExprTol = 1e-8;
constexpr double kSampleTol = 1e-4;

void push(ComplianceReport& rep, const std::string& name, double defect, double tol) {
  rep.items.push_back({name, defect, tol, std::fabs(defect) <= tol});
}

// L2 norm of a sampled vector over [0,1]
double sampled_l2(const std::vector<double>& v, const UniformGrid& g) {
  std::vector<double> sq(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) sq[i] = v[i] * v[i];
  return std::sqrt(std::max(0.0, quadrature::integrate(sq, g)));
}

// Norm of a sampled quantity must be stable under two stride-2 coarsenings,
// else the sampling is too coarse to trust finite-difference derivatives.
void require_stable(const std::vector<double>& v, const UniformGrid& g, const std::string& what) {
  if (g.n < 9 || g.n % 2 == 0)
    throw MissingDerivative(what + ": sampled grid too small or even-sized for stability check");
  auto coarsen = [](const std::vector<double>& in, const UniformGrid& gin) {
    std::vector<double> out;
    for (std::size_t i = 0; i < in.size(); i += 2) out.push_back(in[i]);
    return std::pair{out, UniformGrid(gin.a, gin.b, (gin.n + 1) / 2)};
  };
  const double full = sampled_l2(v, g);
  auto [half, ghalf] = coarsen(v, g);
  const double n_half = sampled_l2(half, ghalf);
  if (ghalf.n < 5 || ghalf.n % 2 == 0)
    throw MissingDerivative(what + ": cannot coarsen twice for the stability check");
  auto [quarter, gq] = coarsen(half, ghalf);
  const double n_quarter = sampled_l2(quarter, gq);
  const double scale = std::max({full, n_half, n_quarter, 1e-300});
  if (std::fabs(full - n_half) / scale > 1e-3 || std::fabs(n_half - n_quarter) / scale > 1e-3)
    throw MissingDerivative(what + ": derivative norm not stable under grid coarsening");
}

struct Derivs1D {
  // callables for v, v', v'', v''' on [0,1] or [0,T]
  std::function<double(double)> d0, d1, d2, d3;
  bool symbolic;
};

// boundary derivative values of a 1D function; sampled inputs use one-sided
// O(h^2) stencils on the raw samples (chained FD arrays lose an order there)
struct BoundaryDerivs {
  double v0, v1;    // f(0), f(1)
  double d0, d1;    // f'(0), f'(1)
  double dd0, dd1;  // f''(0), f''(1)
};

BoundaryDerivs boundary_derivs(const Func1D& f) {
  BoundaryDerivs b{};
  if (f.symbolic()) {
    const Func1D g1 = f.derivative();
    const Func1D g2 = g1.derivative();
    return {f(0.0), f(1.0), g1(0.0), g1(1.0), g2(0.0), g2(1.0)};
  }
  const std::vector<double>& v = f.sample_values();
  const int n = static_cast<int>(v.size());
  if (n < 4) throw MissingDerivative("need at least 4 samples for boundary derivatives");
  const double h = f.sample_grid().step();
  b.v0 = v[0];
  b.v1 = v[n - 1];
  b.d0 = (-3.0 * v[0] + 4.0 * v[1] - v[2]) / (2.0 * h);
  b.d1 = (3.0 * v[n - 1] - 4.0 * v[n - 2] + v[n - 3]) / (2.0 * h);
  b.dd0 = (2.0 * v[0] - 5.0 * v[1] + 4.0 * v[2] - v[3]) / (h * h);
  b.dd1 = (2.0 * v[n - 1] - 5.0 * v[n - 2] + 4.0 * v[n - 3] - v[n - 4]) / (h * h);
  return b;
}

Derivs1D derivs_of(const Func1D& f, int levels) {
  Derivs1D d;
  d.symbolic = f.symbolic();
  Func1D f0 = f;
  std::vector<Func1D> chain{f0};
  for (int i = 0; i < levels; ++i) chain.push_back(chain.back().derivative());
  d.d0 = [g = chain[0]](double v) { return g(v); };
  if (levels >= 1) d.d1 = [g = chain[1]](double v) { return g(v); };
  if (levels >= 2) d.d2 = [g = chain[2]](double v) { return g(v); };
  if (levels >= 3) d.d3 = [g = chain[3]](double v) { return g(v); };
  return d;
}

}  // namespace

ComplianceReport check_conditions(const ProblemData& problem, int nx, int nt) {
  ComplianceReport rep;
  const BasisParams& bp = problem.basis;
  const NonlocalParams& np = problem.nonlocal;
  const double beta = bp.beta;

  // C1
  push(rep, "c1_deltas_nonnegative", std::min(np.delta1, np.delta2) < 0.0 ? 1.0 : 0.0, 0.0);
  const double c1_margin = 1.0 + np.delta1 * np.delta2 - (np.delta1 + np.delta2);
  push(rep, "c1_strict_inequality", c1_margin > 0.0 ? 0.0 : 1.0, 0.0);
  rep.items.back().defect = c1_margin;  // report the margin itself
  rep.items.back().pass = c1_margin > 0.0;

  const double tol1 = problem.phi.symbolic() && problem.psi.symbolic() ? kExprTol : kSampleTol;
  const double tolf = problem.f.symbolic() ? kExprTol : kSampleTol;
  const double tolh = (!problem.h || problem.h->symbolic()) ? kExprTol : kSampleTol;

  // mean-zero integrals
  auto phi_fn = [&](double x) { return problem.phi(x); };
  auto psi_fn = [&](double x) { return problem.psi(x); };
  push(rep, "mean_zero_phi", quadrature::integrate_function(phi_fn, 0.0, 1.0, nx), tol1);
  push(rep, "mean_zero_psi", quadrature::integrate_function(psi_fn, 0.0, 1.0, nx), tol1);
  double worst_f_mean = 0.0;
  UniformGrid tg(0.0, np.T, nt);
  for (int j = 0; j < nt; ++j) {
    const double t = tg.node(j);
    worst_f_mean = std::max(worst_f_mean, std::fabs(quadrature::integrate_function(
                                              [&](double x) { return problem.f(x, t); }, 0.0,
                                              1.0, nx)));
  }
  push(rep, "mean_zero_f", worst_f_mean, tolf);

  // boundary relations of C2..C4
  const BoundaryDerivs phi_b = boundary_derivs(problem.phi);
  const BoundaryDerivs psi_b = boundary_derivs(problem.psi);
  push(rep, "bc_phi_value", phi_b.v0 - beta * phi_b.v1, tol1);
  push(rep, "bc_phi_slope", phi_b.d0 - phi_b.d1, tol1);
  push(rep, "bc_phi_curvature", phi_b.dd0 - beta * phi_b.dd1, tol1);
  push(rep, "bc_psi_value", psi_b.v0 - beta * psi_b.v1, tol1);
  push(rep, "bc_psi_slope", psi_b.d0 - psi_b.d1, tol1);
  const Func2D fx = problem.f.derivative_x();
  double worst_f0 = 0.0, worst_fx = 0.0;
  for (int j = 0; j < nt; ++j) {
    const double t = tg.node(j);
    worst_f0 = std::max(worst_f0, std::fabs(problem.f(0.0, t) - beta * problem.f(1.0, t)));
    worst_fx = std::max(worst_fx, std::fabs(fx(0.0, t) - fx(1.0, t)));
  }
  push(rep, "bc_f_value", worst_f0, tolf);
  push(rep, "bc_f_slope", worst_fx, tolf);

  // C5 and the compatibility equalities (only when h is present)
  if (problem.h) {
    const Func1D& h = *problem.h;
    const Func1D h1 = h.derivative();
    double min_h = std::numeric_limits<double>::infinity();
    for (int j = 0; j < nt; ++j) min_h = std::min(min_h, std::fabs(h(tg.node(j))));
    CheckItem hz{"h_nonzero", min_h, 1e-8, min_h > 1e-8};
    rep.items.push_back(hz);
    push(rep, "compat_value", h(0.0) + np.delta1 * h(np.T) - problem.phi(0.5), tolh);
    push(rep, "compat_slope", h1(0.0) + np.delta2 * h1(np.T) - problem.psi(0.5), tolh);
  }

  rep.all_pass = true;
  for (const CheckItem& it : rep.items) rep.all_pass = rep.all_pass && it.pass;
  return rep;
}

double inverse_lambda_sq_series() { return 1.0 / (2.0 * std::sqrt(6.0)); }

double inverse_lambda_sq_partial(int K, bool with_tail_bound) {
  double s = 0.0;
  for (int k = K; k >= 1; --k) {
    const double lam = 2.0 * k * std::numbers::pi;
    s += 1.0 / (lam * lam);
  }
  // integral tail bound: sum_{k>K} 1/(4 pi^2 k^2) < int_K^inf dk/(4 pi^2 k^2)
  if (with_tail_bound) s += 1.0 / (4.0 * std::numbers::pi * std::numbers::pi * K);
  return std::sqrt(s);
}

ConstantsReport compute_constants(const ProblemData& problem, int nx, int nt) {
  const BasisParams& bp = problem.basis;
  const NonlocalParams& np = problem.nonlocal;
  const double d1 = np.delta1, d2 = np.delta2, T = np.T;
  const double p = bp.p, q = bp.q;

  ConstantsReport r;
  r.rho = 1.0 / rho_lower_bound(np);
  const double sigma = d1 + d2 + d1 * d2;
  const double c = 1.0 + 2.0 * r.rho * sigma;

  r.rho1 = r.rho * r.rho *
               (d1 * (d2 / 2.0 + T / 2.0) +
                d2 * (0.5 + T / 2.0 + d2 * (0.25 + T / 2.0)) +
                d1 * d2 * (0.5 + T / 2.0 + d2 * (0.5 + T / 2.0))) +
           T / 2.0 + d2 * (0.5 + T / 2.0);
  r.rho2 = r.rho * r.rho *
               (d1 * (0.5 + T / 2.0) + d1 * (0.25 + T / 2.0) + d2 * (d1 / 2.0 + T / 2.0) +
                d1 * d2 * (0.5 + T / 2.0 + d1 * (0.5 + T / 2.0))) +
           0.5 + T / 2.0 + d1 * (0.5 + T / 2.0);

  // data norms; derivative stability is enforced for sampled inputs
  DataNorms& n = r.norms;
  if (!problem.phi.symbolic()) {
    Func1D d3 = problem.phi.derivative().derivative().derivative();
    require_stable(d3.sample_values(), d3.sample_grid(), "phi'''");
  }
  if (!problem.psi.symbolic()) {
    Func1D dd = problem.psi.derivative().derivative();
    require_stable(dd.sample_values(), dd.sample_grid(), "psi''");
  }
  Derivs1D phi = derivs_of(problem.phi, 3);
  Derivs1D psi = derivs_of(problem.psi, 2);
  const Func2D fx = problem.f.derivative_x();
  const Func2D fxx = fx.derivative_x();

  n.phi_l2 = quadrature::l2_norm(phi.d0, 0.0, 1.0, nx);
  n.phi3_l2 = quadrature::l2_norm(phi.d3, 0.0, 1.0, nx);
  n.psi_l2 = quadrature::l2_norm(psi.d0, 0.0, 1.0, nx);
  n.psi2_l2 = quadrature::l2_norm(psi.d2, 0.0, 1.0, nx);
  auto weight = [&](double x) { return 1.0 - q - p * x; };
  n.phi3_weighted = quadrature::l2_norm(
      [&](double x) { return phi.d3(x) * weight(x) - 3.0 * p * phi.d2(x); }, 0.0, 1.0, nx);
  n.psi2_weighted = quadrature::l2_norm(
      [&](double x) { return psi.d2(x) * weight(x) - 2.0 * p * psi.d1(x); }, 0.0, 1.0, nx);

  UniformGrid xg(0.0, 1.0, nx), tg(0.0, T, nt);
  n.f_l2 = quadrature::l2_norm_2d([&](double x, double t) { return problem.f(x, t); }, xg, tg);
  n.fxx_l2 = quadrature::l2_norm_2d([&](double x, double t) { return fxx(x, t); }, xg, tg);
  n.fxx_weighted = quadrature::l2_norm_2d(
      [&](double x, double t) { return fxx(x, t) * weight(x) - 2.0 * p * fx(x, t); }, xg, tg);

  if (problem.h) {
    const Func1D& h = *problem.h;
    const Func1D h2 =
        h.symbolic() ? h.derivative().derivative()
                     : Func1D::from_samples(h.sample_grid(),
                                            fd_second_derivative(h.sample_values(),
                                                                 h.sample_grid().step()));
    double sup_diff = 0.0, min_h = std::numeric_limits<double>::infinity();
    for (int j = 0; j < nt; ++j) {
      const double t = tg.node(j);
      sup_diff = std::max(sup_diff, std::fabs(h2(t) - problem.f(0.5, t)));
      min_h = std::min(min_h, std::fabs(h(t)));
    }
    if (min_h <= 0.0) throw HNearZero("h vanishes on the grid; ||1/h|| undefined");
    n.sup_h2_minus_fmid = sup_diff;
    n.sup_inv_h = 1.0 / min_h;
  }

  r.series_constant = inverse_lambda_sq_series();

  r.A[0] = 2.0 / (1.0 + d1) * n.phi_l2 + 2.0 * T / (1.0 + d2) * n.psi_l2 +
           2.0 * (1.0 + 3.0 * d1 + 3.0 * d2) / ((1.0 + d1) * (1.0 + d2)) * T * std::sqrt(T) *
               n.f_l2;
  r.B[0] = (1.0 + 3.0 * d1 + 3.0 * d2) / ((1.0 + d1) * (1.0 + d2)) * T * T;

  r.A[1] = 4.0 * std::sqrt(2.0) * r.rho * (1.0 + d2) * n.phi3_l2 +
           4.0 * std::sqrt(2.0) * r.rho * (1.0 + d1) * n.psi2_l2 +
           4.0 * c * std::sqrt(2.0 * T) * n.fxx_l2;
  r.B[1] = 2.0 * c * T;

  r.A[2] = 8.0 * r.rho * (1.0 + d2) * n.phi3_weighted + 8.0 * r.rho * (1.0 + d1) * n.psi2_weighted +
           8.0 * c * std::sqrt(T) * n.fxx_weighted + 8.0 * r.rho1 * n.phi3_l2 +
           8.0 * r.rho2 * n.psi2_l2 + 8.0 * c * c * T * std::sqrt(T) * n.fxx_l2;
  r.B[2] = 2.0 * std::sqrt(2.0) * c * T + 2.0 * std::sqrt(2.0) * c * c * T * T;

  r.A[3] = n.sup_inv_h *
           (n.sup_h2_minus_fmid +
            0.5 * r.series_constant *
                (2.0 * std::sqrt(2.0) * r.rho * (1.0 + d2) * n.phi3_l2 +
                 2.0 * std::sqrt(2.0) * r.rho * (1.0 + d1) * n.psi2_l2 +
                 c * 2.0 * std::sqrt(2.0 * T) * n.fxx_l2));
  r.B[3] = 0.5 * n.sup_inv_h * r.series_constant * c * T;

  r.A[4] = r.A[0] + r.A[1] + r.A[2];
  r.B[4] = r.B[0] + r.B[1] + r.B[2];
  r.A_total = r.A[3] + r.A[4];
  r.B_total = r.B[3] + r.B[4];
  r.R = r.A_total + 2.0;

  r.contraction_lhs = r.B_total * r.R * r.R;
  r.contraction_holds = r.contraction_lhs < 1.0;
  r.solvability_lhs = (1.0 + 2.0 * d1 + 3.0 * d2 + d1 * d2) * T * T * r.R /
               (2.0 * (1.0 + d1) * (1.0 + d2));
  r.solvability_holds = r.solvability_lhs < 1.0;
  r.equivalence_factor = (1.0 + 2.0 * d1 + 3.0 * d2 + d1 * d2) * T * T /
                  (2.0 * (1.0 + d1) * (1.0 + d2));
  return r;
}

bool contraction_inequality_holds(const ConstantsReport& r) { return r.contraction_lhs < 1.0; }
bool solvability_inequality_holds(const ConstantsReport& r) { return r.solvability_lhs < 1.0; }

bool equivalence_smallness_holds(double a_sup_norm, const NonlocalParams& np, double* lhs) {
  const double factor = (1.0 + 2.0 * np.delta1 + 3.0 * np.delta2 + np.delta1 * np.delta2) *
                        np.T * np.T / (2.0 * (1.0 + np.delta1) * (1.0 + np.delta2));
  const double v = factor * a_sup_norm;
  if (lhs) *lhs = v;
  return v < 1.0;
}

double state_norm(const SpectralState& state) {
  double zero = sup_norm(state.modes[0]);
  double odd_sq = 0.0, even_sq = 0.0;
  for (int k = 1; k <= state.K; ++k) {
    const double w = std::pow(angular_frequency(k), 3);
    const double so = w * sup_norm(state.modes[2 * k - 1]);
    const double se = w * sup_norm(state.modes[2 * k]);
    odd_sq += so * so;
    even_sq += se * se;
  }
  return zero + std::sqrt(odd_sq) + std::sqrt(even_sq);
}

double iterate_norm(const SpectralState& state, std::span<const double> a) {
  double am = 0.0;
  for (double v : a) am = std::max(am, std::fabs(v));
  return state_norm(state) + am;
}

double iterate_distance(const SpectralState& s1, std::span<const double> a1,
                        const SpectralState& s2, std::span<const double> a2) {
  if (s1.K != s2.K || !(s1.tgrid == s2.tgrid) || a1.size() != a2.size())
    throw GridMismatch("iterate_distance: iterates live on different grids");
  const int n = s1.tgrid.n;
  auto diff_sup = [&](const std::vector<double>& u, const std::vector<double>& v) {
    double m = 0.0;
    for (int j = 0; j < n; ++j) m = std::max(m, std::fabs(u[j] - v[j]));
    return m;
  };
  double zero = diff_sup(s1.modes[0], s2.modes[0]);
  double odd_sq = 0.0, even_sq = 0.0;
  for (int k = 1; k <= s1.K; ++k) {
    const double w = std::pow(angular_frequency(k), 3);
    const double so = w * diff_sup(s1.modes[2 * k - 1], s2.modes[2 * k - 1]);
    const double se = w * diff_sup(s1.modes[2 * k], s2.modes[2 * k]);
    odd_sq += so * so;
    even_sq += se * se;
  }
  double am = 0.0;
  for (std::size_t j = 0; j < a1.size(); ++j) am = std::max(am, std::fabs(a1[j] - a2[j]));
  return zero + std::sqrt(odd_sq) + std::sqrt(even_sq) + am;
}

std::vector<EstimateCheck> coefficient_estimate_check(const Expr& v, int i, const BasisParams& bp,
                                                   int K, int quad_points) {
  if (i < 1) throw std::invalid_argument("coefficient_estimate_check: need i >= 1");
  const double beta = bp.beta;

  // derivative chain up to order 2i+1
  std::vector<Expr> d{v};
  for (int s = 1; s <= 2 * i + 1; ++s) d.push_back(d.back().diff('x'));
  auto at = [&](const Expr& e, double x) { return e.eval(Bindings::at_x(x)); };

  // boundary hypotheses: v^(2s)(0) = beta v^(2s)(1), v^(2s+1)(0) = v^(2s+1)(1), s = 0..i
  for (int s = 0; s <= i; ++s) {
    const double dv = std::fabs(at(d[2 * s], 0.0) - beta * at(d[2 * s], 1.0));
    const double scale = 1.0 + std::fabs(at(d[2 * s], 1.0));
    if (dv > 1e-8 * scale)
      throw BoundaryMismatch("v^(2s)(0) != beta v^(2s)(1) at s=" + std::to_string(s));
    if (2 * s + 1 < static_cast<int>(d.size())) {
      const double dw = std::fabs(at(d[2 * s + 1], 0.0) - at(d[2 * s + 1], 1.0));
      const double scalew = 1.0 + std::fabs(at(d[2 * s + 1], 1.0));
      if (dw > 1e-8 * scalew)
        throw BoundaryMismatch("v^(2s+1)(0) != v^(2s+1)(1) at s=" + std::to_string(s));
    }
  }

  std::vector<double> vk = coefficients([&](double x) { return at(v, x); }, K, bp, quad_points);

  auto weighted_sum = [&](bool odd_flats, int power) {
    double acc = 0.0;
    for (int k = 1; k <= K; ++k) {
      const double w = std::pow(angular_frequency(k), power);
      const double c = vk[odd_flats ? 2 * k - 1 : 2 * k];
      acc += (w * c) * (w * c);
    }
    return std::sqrt(acc);
  };
  const double root8 = 2.0 * std::sqrt(2.0);
  const double p = bp.p, q = bp.q;
  auto norm_of = [&](const std::function<double(double)>& g) {
    return quadrature::l2_norm(g, 0.0, 1.0, quad_points);
  };

  std::vector<EstimateCheck> out;
  auto add = [&](std::string label, double lhs, double rhs, bool asserted) {
    out.push_back({std::move(label), lhs, rhs, lhs <= rhs + 1e-8, asserted});
  };

  // even-order estimates
  add("even_order_odd_coeffs", weighted_sum(true, 2 * i),
      root8 * norm_of([&](double x) { return at(d[2 * i], x); }), true);
  add("even_order_even_coeffs", weighted_sum(false, 2 * i),
      root8 * norm_of([&](double x) {
        return at(d[2 * i], x) * (1.0 - q - p * x) - 2.0 * i * p * at(d[2 * i - 1], x);
      }),
      true);
  // odd-order estimates
  add("odd_order_odd_coeffs", weighted_sum(true, 2 * i + 1),
      root8 * norm_of([&](double x) { return at(d[2 * i + 1], x); }), true);
  const double weighted_rhs = root8 * norm_of([&](double x) {
    return at(d[2 * i + 1], x) * (1.0 - q - p * x) - (2.0 * i + 1.0) * p * at(d[2 * i], x);
  });
  add("odd_order_even_coeffs", weighted_sum(false, 2 * i + 1), weighted_rhs, true);
  // the pairing as printed in the source display; reported, not asserted
  add("odd_order_odd_coeffs_vs_weighted", weighted_sum(true, 2 * i + 1), weighted_rhs, false);
  return out;
}

double max_feasible_T(const std::function<ProblemData(double)>& family, int nx, int nt,
                      double T_hint, double rel_tol) {
  auto holds = [&](double T) {
    ProblemData prob = family(T);
    return contraction_inequality_holds(compute_constants(prob, nx, nt));
  };
  double lo = T_hint;
  int guard = 0;
  while (!holds(lo)) {
    lo /= 2.0;
    if (++guard > 200) throw NonConvergence("no feasible T found down to T ~ 1e-60", guard, lo);
  }
  double hi = lo * 2.0;
  // lo holds; grow hi until it fails (cap the growth)
  while (holds(hi) && hi < 64.0 * T_hint) {
    lo = hi;
    hi *= 2.0;
  }
  if (holds(hi)) return lo;  // feasible out to the cap; return a certified point
  while (hi - lo > rel_tol * std::max(lo, 1e-9)) {
    const double mid = 0.5 * (lo + hi);
    (holds(mid) ? lo : hi) = mid;
  }
  return lo;
}

}  // namespace nlwave
