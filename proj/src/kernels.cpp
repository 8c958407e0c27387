#include "nlwave/kernels.hpp"

#include <cmath>
#include <string>

#include "nlwave/basis.hpp"

namespace nlwave {

NonlocalParams make_nonlocal_params(double delta1, double delta2, double T) {
  if (delta1 < 0.0 || delta2 < 0.0)
    throw std::invalid_argument("nonlocal weights must be nonnegative");
  if (!(T > 0.0)) throw std::invalid_argument("horizon T must be positive");
  if (!(1.0 + delta1 * delta2 > delta1 + delta2))
    throw std::invalid_argument(
        "need 1 + delta1*delta2 > delta1 + delta2 (strictly); the uniform rho bound fails "
        "otherwise");
  return {delta1, delta2, T};
}

double rho_k(int k, const NonlocalParams& np) {
  const double lam = angular_frequency(k);
  const double r = 1.0 + (np.delta1 + np.delta2) * std::cos(lam * np.T) + np.delta1 * np.delta2;
  if (r <= 0.0)
    throw NonPositiveRho("rho_" + std::to_string(k) + "(T) = " + std::to_string(r) + " <= 0");
  return r;
}

double rho_lower_bound(const NonlocalParams& np) {
  return 1.0 - (np.delta1 + np.delta2) + np.delta1 * np.delta2;
}

double green0(double t, double tau, const NonlocalParams& np) {
  const double d1 = np.delta1, d2 = np.delta2, T = np.T;
  const double denom = (1.0 + d1) * (1.0 + d2);
  if (t >= tau)
    return -(d2 * t + d1 * (T - tau) - (1.0 + d1 + d2) * (t - tau)) / denom;
  return -(d2 * t + d1 * (T - tau) + d1 * d2 * (t - tau)) / denom;
}

double green_k(int k, double t, double tau, const NonlocalParams& np) {
  const double d1 = np.delta1, d2 = np.delta2, T = np.T;
  const double lam = angular_frequency(k);
  const double rho = rho_k(k, np);
  double v = -(1.0 / (rho * lam)) *
             (d1 * std::sin(lam * (T - tau)) * std::cos(lam * t) +
              d2 * std::cos(lam * (T - tau)) * std::sin(lam * t) +
              d1 * d2 * std::sin(lam * (t - tau)));
  if (t >= tau) v += std::sin(lam * (t - tau)) / lam;
  return v;
}

double coupling_bracket_position(int k, double t, const NonlocalParams& np) {
  const double d1 = np.delta1, d2 = np.delta2, T = np.T;
  const double lam = angular_frequency(k);
  const double rho = rho_k(k, np);
  const double bracket =
      d1 * std::cos(lam * t) *
          (T / 2.0 * std::sin(lam * T) + d2 * 0.25 * (1.0 - std::cos(2.0 * lam * T))) +
      d2 * std::sin(lam * t) *
          (std::sin(lam * T) / (2.0 * lam) + T / 2.0 * std::cos(lam * T) +
           d2 * (T / 2.0 + std::sin(2.0 * lam * T) / (4.0 * lam))) +
      d1 * d2 *
          ((std::cos(lam * (2.0 * T - t)) - std::cos(lam * t)) / (4.0 * lam) +
           T / 2.0 * std::sin(lam * t) +
           d2 * (-T / 2.0 * std::sin(lam * (T - t)) +
                 (std::cos(lam * (T - t)) - std::cos(lam * (T + t))) / (4.0 * lam)));
  return -bracket / (rho * rho * lam) + t / 2.0 * std::sin(lam * t) +
         d2 * (-t / 2.0 * std::sin(lam * (T - t)) +
               (std::cos(lam * (T - t)) - std::cos(lam * (T + t))) / (4.0 * lam));
}

double coupling_bracket_velocity(int k, double t, const NonlocalParams& np) {
  const double d1 = np.delta1, d2 = np.delta2, T = np.T;
  const double lam = angular_frequency(k);
  const double rho = rho_k(k, np);
  const double bracket =
      d1 * std::cos(lam * t) * (std::sin(lam * T) / (2.0 * lam) - T / 2.0 * std::cos(lam * T)) -
      d1 * (T / 2.0 - std::sin(2.0 * lam * T) / (4.0 * lam)) +
      d2 * std::sin(lam * t) *
          (T / 2.0 * std::sin(lam * T) - d1 * (1.0 - std::cos(2.0 * lam * T)) / (4.0 * lam)) +
      d1 * d2 *
          ((std::sin(lam * (2.0 * T - t)) + std::sin(lam * t)) / (4.0 * lam) -
           T / 2.0 * std::cos(lam * t) -
           d1 * (T / 2.0 * std::cos(lam * (T - t)) -
                 (std::sin(lam * (T - t)) + std::sin(lam * (T + t))) / (4.0 * lam)));
  return -bracket / (rho * rho * lam) +
         (std::sin(lam * t) / (2.0 * lam) - t / 2.0 * std::cos(lam * t) -
          d1 * (t / 2.0 * std::cos(lam * (T - t)) +
                (std::sin(lam * (T - t)) - std::sin(lam * (T + t))) / (4.0 * lam)));
}

}  // namespace nlwave
