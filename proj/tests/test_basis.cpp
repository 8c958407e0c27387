#include <cmath>
#include <numbers>
#include <random>

#include "doctest.h"
#include "nlwave/basis.hpp"
#include "nlwave/manufactured.hpp"
#include "nlwave/quadrature.hpp"

using namespace nlwave;

namespace {
constexpr double kPi = std::numbers::pi;
}

TEST_CASE("angular frequency") {
  CHECK(angular_frequency(1) == doctest::Approx(2 * kPi).epsilon(1e-14));
  CHECK(angular_frequency(2) == doctest::Approx(4 * kPi).epsilon(1e-14));
  CHECK(angular_frequency(10) == doctest::Approx(20 * kPi).epsilon(1e-14));
  CHECK_THROWS_AS(angular_frequency(0), std::invalid_argument);
}

TEST_CASE("basis parameters") {
  BasisParams b0 = make_basis_params(0.0);
  CHECK(b0.p == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(b0.q == doctest::Approx(0.0).epsilon(1e-15));
  BasisParams b3 = make_basis_params(3.0);
  CHECK(b3.p == doctest::Approx(-0.5).epsilon(1e-15));
  CHECK(b3.q == doctest::Approx(0.75).epsilon(1e-15));
  CHECK_THROWS_AS(make_basis_params(1.0), DegenerateBeta);
  CHECK_THROWS_AS(make_basis_params(-1.0), DegenerateBeta);

  std::mt19937 rng(11);
  std::uniform_real_distribution<double> u(-0.9, 8.0);
  for (int i = 0; i < 50; ++i) {
    double beta = u(rng);
    if (std::fabs(beta - 1) < 0.05 || std::fabs(beta + 1) < 0.05) continue;
    BasisParams bp = make_basis_params(beta);
    CHECK(std::fabs(bp.p / 2 + bp.q - 0.5) <= 1e-14);
    CHECK(std::fabs((1 + beta) * bp.p - (1 - beta)) <= 1e-14);
    CHECK(std::fabs((1 + beta) * bp.q - beta) <= 1e-14);
  }
}

TEST_CASE("basis function values") {
  BasisParams b0 = make_basis_params(0.0);
  BasisParams b3 = make_basis_params(3.0);
  CHECK(basis_function({Parity::odd, 1}, b0, 0.5) == doctest::Approx(-0.5).epsilon(1e-12));
  CHECK(std::fabs(basis_function({Parity::even, 1}, b3, 0.5)) <= 1e-12);
  CHECK(basis_function({Parity::zero, 0}, b3, 0.0) == doctest::Approx(0.75).epsilon(1e-14));
}

TEST_CASE("dual family values") {
  BasisParams b3 = make_basis_params(3.0);
  SUBCASE("biorthogonal family") {
    CHECK(dual_function({Parity::zero, 0}, b3, 0.3) == 2.0);
    CHECK(dual_function({Parity::odd, 1}, b3, 0.0) == doctest::Approx(4.0).epsilon(1e-14));
    // 4 (1 - q - p/4) sin(pi/2) = 4 (1 - 0.75 + 0.125)
    CHECK(dual_function({Parity::even, 1}, b3, 0.25) ==
          doctest::Approx(1.5).epsilon(1e-12));
  }
  SUBCASE("as-printed family") {
    CHECK(dual_function({Parity::zero, 0}, b3, 0.3, DualFamily::as_printed) == 2.0);
    CHECK(dual_function({Parity::odd, 1}, b3, 0.25, DualFamily::as_printed) ==
          doctest::Approx(4.0).epsilon(1e-12));
    // q (1 - q) cos(0) = (3/4)(1/4)
    CHECK(dual_function({Parity::even, 1}, b3, 0.0, DualFamily::as_printed) ==
          doctest::Approx(3.0 / 16.0).epsilon(1e-14));
  }
}

TEST_CASE("closed-form derivatives") {
  BasisParams b0 = make_basis_params(0.0);
  Derivs even = basis_derivatives({Parity::even, 1}, b0, 0.0);
  CHECK(even.value == 0.0);
  CHECK(even.d1 == doctest::Approx(2 * kPi).epsilon(1e-14));
  CHECK(even.d2 == 0.0);
  Derivs zero = basis_derivatives({Parity::zero, 0}, b0, 0.37);
  CHECK(zero.value == doctest::Approx(0.37));
  CHECK(zero.d1 == 1.0);
  CHECK(zero.d2 == 0.0);
  Derivs odd = basis_derivatives({Parity::odd, 1}, b0, 0.0);
  CHECK(odd.value == 0.0);
  CHECK(odd.d1 == doctest::Approx(1.0).epsilon(1e-14));  // p at beta = 0
  CHECK(std::fabs(odd.d2) <= 1e-12);
}

TEST_CASE("derivatives agree with the symbolic expression tree") {
  BasisParams b3 = make_basis_params(3.0);
  for (int flat = 0; flat <= 6; ++flat) {
    ModeIndex m = mode_from_flat(flat);
    Expr X = mode_expression(m, b3);
    Expr X1 = X.diff('x');
    Expr X2 = X1.diff('x');
    for (double x : {0.0, 0.21, 0.5, 0.77, 1.0}) {
      Derivs d = basis_derivatives(m, b3, x);
      CHECK(std::fabs(d.value - X.eval(Bindings::at_x(x))) <= 1e-11);
      CHECK(std::fabs(d.d1 - X1.eval(Bindings::at_x(x))) <= 1e-9);
      CHECK(std::fabs(d.d2 - X2.eval(Bindings::at_x(x))) <= 1e-8);
    }
  }
}

TEST_CASE("derivatives agree with finite differences to O(h^2)") {
  BasisParams bp = make_basis_params(-0.5);
  const double h = 1e-4;
  for (int flat = 0; flat <= 8; ++flat) {
    ModeIndex m = mode_from_flat(flat);
    // stencil truncation grows with the mode frequency: h^2/6 f''' and
    // h^2/12 f'''' plus the h^-2 roundoff amplification of the second stencil
    const double lam = (m.parity == Parity::zero) ? 0.0 : angular_frequency(m.k);
    // the linear factor px+q reaches 2 at beta = -0.5, hence the amplitude 4
    const double tol1 = 1e-6 + h * h / 6 * std::pow(lam, 3) * 4.0;
    const double tol2 = 1e-6 + h * h / 12 * std::pow(lam, 4) * 4.0 + 8e-16 / (h * h);
    for (double x : {0.1, 0.35, 0.62, 0.9}) {
      auto f = [&](double xx) { return basis_function(m, bp, xx); };
      Derivs d = basis_derivatives(m, bp, x);
      CHECK(std::fabs(d.d1 - (f(x + h) - f(x - h)) / (2 * h)) <= tol1);
      CHECK(std::fabs(d.d2 - (f(x + h) - 2 * f(x) + f(x - h)) / (h * h)) <= tol2);
    }
  }
  // the flat bound of the consistency contract holds for the slow modes
  auto f0 = [&](double xx) { return basis_function({Parity::zero, 0}, bp, xx); };
  Derivs d0 = basis_derivatives({Parity::zero, 0}, bp, 0.4);
  CHECK(std::fabs(d0.d1 - (f0(0.4 + h) - f0(0.4 - h)) / (2 * h)) <= 1e-6);
  auto f1 = [&](double xx) { return basis_function({Parity::odd, 1}, bp, xx); };
  Derivs d1 = basis_derivatives({Parity::odd, 1}, bp, 0.4);
  CHECK(std::fabs(d1.d1 - (f1(0.4 + h) - f1(0.4 - h)) / (2 * h)) <= 1e-6);
}

TEST_CASE("coefficient extraction picks out single modes") {
  BasisParams b3 = make_basis_params(3.0);
  const int K = 5;
  SUBCASE("zero mode") {
    auto c = coefficients([&](double x) { return basis_function({Parity::zero, 0}, b3, x); }, K,
                          b3, 513);
    CHECK(c[0] == doctest::Approx(1.0).epsilon(1e-10));
    for (int i = 1; i <= 2 * K; ++i) CHECK(std::fabs(c[i]) <= 1e-10);
  }
  SUBCASE("even mode against a high-resolution oracle") {
    auto work = coefficients([&](double x) { return basis_function({Parity::even, 1}, b3, x); },
                             K, b3, 513);
    auto fine = coefficients([&](double x) { return basis_function({Parity::even, 1}, b3, x); },
                             K, b3, 4097);
    CHECK(work[2] == doctest::Approx(1.0).epsilon(1e-8));
    for (int i = 0; i <= 2 * K; ++i) CHECK(std::fabs(work[i] - fine[i]) <= 1e-10);
  }
  SUBCASE("zero function") {
    auto c = coefficients([](double) { return 0.0; }, K, b3, 513);
    for (double v : c) CHECK(v == 0.0);
  }
}

TEST_CASE("synthesis") {
  BasisParams b3 = make_basis_params(3.0);
  std::vector<double> e0{1.0};
  CHECK(synthesize(e0, b3, 0.4) ==
        doctest::Approx(basis_function({Parity::zero, 0}, b3, 0.4)).epsilon(1e-14));
  std::vector<double> zeros(11, 0.0);
  CHECK(synthesize(zeros, b3, 0.3) == 0.0);

  auto c = coefficients([&](double x) { return basis_function({Parity::even, 1}, b3, x); }, 5,
                        b3, 513);
  for (int i = 0; i <= 100; ++i) {
    const double x = i / 100.0;
    CHECK(std::fabs(synthesize(c, b3, x) - basis_function({Parity::even, 1}, b3, x)) <= 1e-8);
  }
}

TEST_CASE("reconstruction of a random span element") {
  BasisParams bp = make_basis_params(-0.5);
  const int K = 6;
  std::mt19937 rng(3);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  std::vector<double> truth(2 * K + 1);
  for (double& v : truth) v = u(rng);
  auto c = coefficients([&](double x) { return synthesize(truth, bp, x); }, K, bp,
                        default_quad_points(K));
  for (int i = 0; i <= 200; ++i) {
    const double x = i / 200.0;
    CHECK(std::fabs(synthesize(c, bp, x) - synthesize(truth, bp, x)) <= 1e-7);
  }
}

TEST_CASE("biorthogonality defect") {
  for (double beta : {-0.5, 0.0, 0.5, 3.0}) {
    CAPTURE(beta);
    CHECK(biorthogonality_defect(5, make_basis_params(beta), 2049) <= 1e-10);
  }
  // K = 0: only the zero pair, |int 2(px+q) dx - 1|
  CHECK(biorthogonality_defect(0, make_basis_params(3.0), 513) <= 1e-14);
  // the as-printed family is kept for comparison only; it fails biorthogonality
  CHECK(biorthogonality_defect(2, make_basis_params(3.0), 2049, DualFamily::as_printed) > 0.5);
}

TEST_CASE("as-printed family rejects beta = 0 extraction") {
  BasisParams b0 = make_basis_params(0.0);
  CHECK_THROWS_AS(
      coefficients([](double) { return 1.0; }, 2, b0, 513, DualFamily::as_printed),
      DegenerateBeta);
  // fine when only the zero mode is requested
  CHECK_NOTHROW(coefficients([](double) { return 1.0; }, 0, b0, 513, DualFamily::as_printed));
}

TEST_CASE("boundary structure and mean-zero of the basis") {
  for (double beta : {-0.5, 0.5, 3.0}) {
    BasisParams bp = make_basis_params(beta);
    for (int flat = 0; flat <= 20; ++flat) {
      ModeIndex m = mode_from_flat(flat);
      Derivs a0 = basis_derivatives(m, bp, 0.0);
      Derivs a1 = basis_derivatives(m, bp, 1.0);
      CHECK(std::fabs(a0.value - beta * a1.value) <= 1e-12);
      CHECK(std::fabs(a0.d1 - a1.d1) <= 1e-12);
      if (flat >= 1) {
        const double mean = quadrature::integrate_function(
            [&](double x) { return basis_function(m, bp, x); }, 0.0, 1.0, 2049);
        CHECK(std::fabs(mean) <= 1e-10);
      }
    }
  }
}

TEST_CASE("resolution warning for coarse extraction grids") {
  BasisParams bp = make_basis_params(3.0);
  std::vector<std::string> warnings;
  coefficients([](double) { return 0.0; }, 20, bp, 129, DualFamily::biorthogonal, &warnings);
  REQUIRE(warnings.size() == 1);
  CHECK(warnings[0].find("QuadratureResolution") != std::string::npos);
  CHECK(default_quad_points(20) == 513);
  CHECK(default_quad_points(40) == 641);
  CHECK(quadrature_resolution_ok(16, 513));
  CHECK(!quadrature_resolution_ok(20, 129));
}
