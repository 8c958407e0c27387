#pragma once

#include <optional>
#include <string>
#include <vector>

#include "nlwave/conditions.hpp"
#include "nlwave/grid.hpp"
#include "nlwave/problem.hpp"
#include "nlwave/spectral.hpp"

namespace nlwave {

/// The pair the contraction map acts on: truncated state plus coefficient
/// samples on the shared time grid.
struct Iterate {
  SpectralState state;
  TimeGridFunction a;

  static Iterate zeros(const UniformGrid& g, int K);
};

double iterate_norm(const Iterate& z);
double iterate_distance(const Iterate& z1, const Iterate& z2);

/// Defects of a solution against the original problem statement.
struct Residuals {
  double pde = 0.0;        // sup |u_tt - u_xx - a u - f|
  double integral = 0.0;   // sup_t |int_0^1 u dx|
  double overdet = 0.0;    // sup_t |u(1/2,t) - h(t)|
  double ic_value = 0.0;   // sup_x |u(x,0) + d1 u(x,T) - phi|
  double ic_deriv = 0.0;   // sup_x |u_t(x,0) + d2 u_t(x,T) - psi|
  double bc_value = 0.0;   // sup_t |u(0,t) - beta u(1,t)|
  double bc_flux = 0.0;    // sup_t |u_x(0,t) - u_x(1,t)|
};

struct SolveResult {
  Iterate solution;
  int iterations = 0;
  bool converged = false;
  std::vector<double> history;             // E-norm deltas per iteration
  std::vector<double> contraction_ratios;  // history[i+1]/history[i]
  double a_tail_ratio = 0.0;               // truncation diagnostic of the coefficient series
  std::optional<Residuals> residuals;
  std::vector<std::string> warnings;
};

struct SolveOptions {
  double tol = 1e-10;
  int max_iter = 100;
  enum class Init { data_only, zero, custom } init = Init::data_only;
  std::optional<Iterate> initial;  // used when init == custom
  CouplingMode mode = CouplingMode::ode_consistent;
  std::optional<double> ball_radius;  // enables the escape warning
  int threads = 1;
};

/// One application of the contraction map: rebuild every mode from the
/// current sources, then the coefficient from the observation identity.
Iterate apply_picard_map(const Iterate& z, const DataCoefficients& data,
                         const NonlocalParams& np, const BasisParams& bp,
                         CouplingMode mode = CouplingMode::ode_consistent, int threads = 1,
                         double* tail_ratio = nullptr);

/// Picard iteration z_{n+1} = Phi z_n from the chosen start until the E-norm
/// delta drops to tol. Throws NonConvergence at max_iter.
SolveResult fixed_point_solve(const DataCoefficients& data, const NonlocalParams& np,
                              const BasisParams& bp, const SolveOptions& opts = {});

/// Picard iteration on the state only, with the coefficient frozen.
struct ForwardResult {
  SpectralState state;
  int iterations = 0;
  bool converged = false;
  std::vector<double> history;
};

ForwardResult forward_solve(const DataCoefficients& data, std::span<const double> a_known,
                            const NonlocalParams& np, const BasisParams& bp,
                            const SolveOptions& opts = {});

/// Defect report of an iterate against the full problem, on an x-grid of nx
/// nodes (nx odd so the observation point 1/2 is a node).
Residuals residual_report(const Iterate& z, const ProblemData& problem, int nx);

}  // namespace nlwave
