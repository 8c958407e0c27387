#pragma once

#include "nlwave/errors.hpp"

namespace nlwave {

/// Nonlocal condition weights delta1, delta2 and the horizon T.
/// Construction enforces delta1, delta2 >= 0, T > 0 and the strict inequality
/// 1 + delta1*delta2 > delta1 + delta2 (equality would make the uniform lower
/// bound on rho_k vanish).
struct NonlocalParams {
  double delta1;
  double delta2;
  double T;
};

NonlocalParams make_nonlocal_params(double delta1, double delta2, double T);

/// rho_k(T) = 1 + (d1+d2) cos(lambda_k T) + d1 d2. Throws NonPositiveRho when
/// the value is <= 0 (signals a parameter invariant violation).
double rho_k(int k, const NonlocalParams& np);

/// Uniform bound: 1/rho_k(T) <= 1 / (1 - (d1+d2) + d1 d2) for all k.
double rho_lower_bound(const NonlocalParams& np);

/// Green kernel of the zero mode (u'' = F with the nonlocal conditions).
/// Piecewise in t vs tau; both branches agree at t = tau; ties resolve to the
/// t >= tau branch.
double green0(double t, double tau, const NonlocalParams& np);

/// Green kernel of oscillatory mode k (u'' + lambda_k^2 u = F).
double green_k(int k, double t, double tau, const NonlocalParams& np);

/// The brace multiplying the odd-mode position datum (-phi_{2k-1}) in the
/// even-mode representation, transcribed term for term with no simplification.
double coupling_bracket_position(int k, double t, const NonlocalParams& np);

/// The brace multiplying the odd-mode velocity datum (psi_{2k-1}/lambda_k).
double coupling_bracket_velocity(int k, double t, const NonlocalParams& np);

}  // namespace nlwave
