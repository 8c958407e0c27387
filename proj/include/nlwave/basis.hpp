#pragma once

#include <functional>
#include <span>
#include <string>
#include <vector>

#include "nlwave/errors.hpp"
#include "nlwave/grid.hpp"

namespace nlwave {

/// Coupling constant beta of the boundary condition u(0,t) = beta*u(1,t)
/// together with the derived numbers p = (1-beta)/(1+beta), q = beta/(1+beta).
/// p/2 + q = 1/2 for every admissible beta.
struct BasisParams {
  double beta;
  double p;
  double q;
};

/// Builds BasisParams; rejects beta within 1e-12 of +-1 (p = 0 or 1+beta = 0).
BasisParams make_basis_params(double beta);

enum class Parity { zero, odd, even };

/// Mode (parity, k): flat index 0 <-> zero, 2k-1 <-> odd, 2k <-> even; k >= 1.
struct ModeIndex {
  Parity parity = Parity::zero;
  int k = 0;
};

ModeIndex mode_from_flat(int flat);
int flat_index(ModeIndex m);

/// Angular frequency lambda_k = 2*k*pi of mode k >= 1. Rejects k = 0
/// (the zero mode is the linear function, it has no frequency).
double angular_frequency(int k);

/// Basis function value: X_0 = p x + q, X_{2k-1} = (p x + q) cos(lambda_k x),
/// X_{2k} = sin(lambda_k x).
double basis_function(ModeIndex m, const BasisParams& bp, double x);

struct Derivs {
  double value;
  double d1;
  double d2;
};

/// Closed-form value and first two spatial derivatives of the basis function.
Derivs basis_derivatives(ModeIndex m, const BasisParams& bp, double x);

/// Which dual family to pair with the basis.
///   biorthogonal — the family satisfying int X_j Y_k = delta_jk:
///                  Y_0 = 2, Y_{2k-1} = 4 cos(lambda_k x),
///                  Y_{2k} = 4 (1-q-p x) sin(lambda_k x).  Default.
///   as_printed   — an alternate normalization found in circulation:
///                  Y_0 = 2, Y_{2k-1} = 4 sin(lambda_k x),
///                  Y_{2k} = q (1-q-p x) cos(lambda_k x).
///                  Not biorthogonal to X for any beta (and identically zero
///                  for beta = 0); kept for comparison only.
enum class DualFamily { biorthogonal, as_printed };

double dual_function(ModeIndex m, const BasisParams& bp, double x,
                     DualFamily family = DualFamily::biorthogonal);

/// Default spatial quadrature node count for truncation K:
/// max(513, 16K+1), odd, giving >= 8 samples per period of the highest mode.
int default_quad_points(int K);

/// True when n grid points resolve truncation K adequately (n >= 8K).
bool quadrature_resolution_ok(int K, int quad_points);

/// Coefficients v_k = int_0^1 v(x) Y_k(x) dx for k = 0..2K by composite
/// quadrature. Appends a resolution warning to *warnings when quad_points < 8K.
/// With the as_printed family, beta = 0 and K >= 1 is rejected (the even duals
/// vanish identically there).
std::vector<double> coefficients(const std::function<double(double)>& v, int K,
                                 const BasisParams& bp, int quad_points,
                                 DualFamily family = DualFamily::biorthogonal,
                                 std::vector<std::string>* warnings = nullptr);

/// Sample-based extraction: v given on its own uniform grid over [0,1].
std::vector<double> coefficients(std::span<const double> samples, const UniformGrid& grid, int K,
                                 const BasisParams& bp,
                                 DualFamily family = DualFamily::biorthogonal,
                                 std::vector<std::string>* warnings = nullptr);

/// Finite synthesis sum_k coeffs[k] X_k(x), coeffs indexed flat 0..2K.
double synthesize(std::span<const double> coeffs, const BasisParams& bp, double x);

/// max_{j,k <= 2K} | int_0^1 X_j Y_k dx - delta_jk | on quad_points nodes.
double biorthogonality_defect(int K, const BasisParams& bp, int quad_points,
                              DualFamily family = DualFamily::biorthogonal);

}  // namespace nlwave
