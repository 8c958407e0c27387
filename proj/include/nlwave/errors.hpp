#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace nlwave {

/// Base class for all library errors.
struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// beta in {1, -1}: p = (1-beta)/(1+beta) is zero or undefined.
struct DegenerateBeta : Error {
  using Error::Error;
};

/// rho_k(T) <= 0; the nonlocal parameter invariant 1 + d1*d2 > d1 + d2 is violated.
struct NonPositiveRho : Error {
  using Error::Error;
};

/// |h(t)| dipped below the eps_h guard somewhere on the time grid.
struct HNearZero : Error {
  using Error::Error;
};

/// A manufactured spec produced h identically zero (no odd-parity contribution).
struct HIdenticallyZero : Error {
  using Error::Error;
};

/// Picard iteration hit max_iter without meeting the tolerance.
struct NonConvergence : Error {
  NonConvergence(const std::string& msg, int iterations, double last_delta)
      : Error(msg), iterations(iterations), last_delta(last_delta) {}
  int iterations;
  double last_delta;
};

/// Sampled data too coarse to produce stable derivative norms.
struct MissingDerivative : Error {
  using Error::Error;
};

/// Function handed to a coefficient-decay estimate violates the boundary
/// relations the estimate assumes.
struct BoundaryMismatch : Error {
  using Error::Error;
};

/// Two grid-carried objects do not live on the same grid.
struct GridMismatch : Error {
  using Error::Error;
};

/// Expression evaluation touched a variable with no binding.
struct UnboundVariable : Error {
  using Error::Error;
};

/// Expression evaluation produced a non-finite value (division by zero, log of
/// a nonpositive argument, ...).
struct EvalError : Error {
  using Error::Error;
};

/// Differentiation requested through a non-differentiable node (abs).
struct NonDifferentiable : Error {
  using Error::Error;
};

/// Text could not be parsed as an expression. Carries the 0-based byte offset
/// of the failure and the token classes that would have been accepted there.
struct ParseError : Error {
  ParseError(const std::string& msg, std::size_t offset, std::vector<std::string> expected)
      : Error(msg), offset(offset), expected(std::move(expected)) {}
  std::size_t offset;
  std::vector<std::string> expected;
};

}  // namespace nlwave
