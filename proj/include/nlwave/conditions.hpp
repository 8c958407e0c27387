#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "nlwave/expr.hpp"
#include "nlwave/problem.hpp"
#include "nlwave/spectral.hpp"

namespace nlwave {

/// One audited condition: measured defect against its tolerance.
struct CheckItem {
  std::string name;
  double defect = 0.0;
  double tol = 0.0;
  bool pass = false;
};

/// Results of the regularity/compatibility audit (C1..C5, the mean-zero
/// integrals, the boundary relations and the two compatibility equalities).
struct ComplianceReport {
  std::vector<CheckItem> items;
  bool all_pass = false;
  const CheckItem* find(const std::string& name) const;
};

ComplianceReport check_conditions(const ProblemData& problem, int nx, int nt);

/// Every norm entering the contraction constants.
struct DataNorms {
  double phi_l2 = 0.0;           // ||phi||
  double phi3_l2 = 0.0;          // ||phi'''||
  double psi_l2 = 0.0;           // ||psi||
  double psi2_l2 = 0.0;          // ||psi''||
  double f_l2 = 0.0;             // ||f||_{L2(D_T)}
  double fxx_l2 = 0.0;           // ||f_xx||_{L2(D_T)}
  double phi3_weighted = 0.0;    // ||phi'''(1-q-px) - 3p phi''||
  double psi2_weighted = 0.0;    // ||psi''(1-q-px) - 2p psi'||
  double fxx_weighted = 0.0;     // ||f_xx(1-q-px) - 2p f_x||_{L2(D_T)}
  double sup_h2_minus_fmid = 0.0;  // ||h'' - f(1/2,.)||_C
  double sup_inv_h = 0.0;          // ||1/h||_C
};

/// The contraction machinery: rho, rho1, rho2, A1..A5, B1..B5, the ball radius
/// and the three smallness inequalities.
struct ConstantsReport {
  double rho = 0.0;
  double rho1 = 0.0;
  double rho2 = 0.0;
  double A[5] = {0, 0, 0, 0, 0};  // A1..A5 (A[3] = A4, A[4] = A5)
  double B[5] = {0, 0, 0, 0, 0};
  double A_total = 0.0;  // A(T) = A4 + A5
  double B_total = 0.0;  // B(T) = B4 + B5
  double R = 0.0;        // ball radius A(T) + 2
  double series_constant = 0.0;  // (sum lambda_k^-2)^(1/2) = 1/(2 sqrt 6)
  double contraction_lhs = 0.0;         // B(T) (A(T)+2)^2
  bool contraction_holds = false;
  double solvability_lhs = 0.0;
  bool solvability_holds = false;
  double equivalence_factor = 0.0;  // multiplies ||a||_C in the smallness inequality
  DataNorms norms;
};

ConstantsReport compute_constants(const ProblemData& problem, int nx, int nt);

bool contraction_inequality_holds(const ConstantsReport& r);
bool solvability_inequality_holds(const ConstantsReport& r);
bool equivalence_smallness_holds(double a_sup_norm, const NonlocalParams& np, double* lhs = nullptr);

/// Exact value of (sum_{k>=1} lambda_k^{-2})^{1/2} = 1/(2 sqrt 6).
double inverse_lambda_sq_series();
/// Partial sum over k <= K plus the integral tail bound (for verification).
double inverse_lambda_sq_partial(int K, bool with_tail_bound = true);

/// Truncated smoothness norm of a state:
/// max|u0| + (sum (lambda_k^3 max|u_{2k-1}|)^2)^(1/2)
///         + (sum (lambda_k^3 max|u_{2k}|)^2)^(1/2).
double state_norm(const SpectralState& state);

/// Iterate norm: state_norm + max|a|.
double iterate_norm(const SpectralState& state, std::span<const double> a);

/// Norm of the difference of two iterates living on the same grid.
double iterate_distance(const SpectralState& s1, std::span<const double> a1,
                        const SpectralState& s2, std::span<const double> a2);

/// One line of a coefficient-decay estimate check.
struct EstimateCheck {
  std::string label;
  double lhs = 0.0;
  double rhs = 0.0;
  bool holds = false;
  bool asserted = true;  // false for the reported-only printed pairing
};

/// Spot-check of the coefficient-decay estimates for a symbolic v at order i.
/// Verifies the boundary hypotheses first (throws BoundaryMismatch otherwise).
/// Sums are truncated at K; quadrature on quad_points nodes.
std::vector<EstimateCheck> coefficient_estimate_check(const Expr& v, int i, const BasisParams& bp,
                                                   int K, int quad_points);

/// Largest T with the contraction inequality holding, by bracketed bisection
/// on a problem family parameterised by T. Returns the certified lower end.
double max_feasible_T(const std::function<ProblemData(double)>& family, int nx, int nt,
                      double T_hint = 1.0, double rel_tol = 1e-4);

}  // namespace nlwave
