#include <cmath>
#include <numbers>
#include <random>
#include <vector>

#include "doctest.h"
#include "nlwave/quadrature.hpp"

using namespace nlwave;
namespace quad = nlwave::quadrature;

namespace {

std::vector<double> sample(const UniformGrid& g, double (*f)(double)) {
  std::vector<double> s(g.n);
  for (int i = 0; i < g.n; ++i) s[i] = f(g.node(i));
  return s;
}

}  // namespace

TEST_CASE("constant integrates exactly") {
  UniformGrid g(0, 1, 11);
  std::vector<double> s(11, 1.0);
  CHECK(quad::integrate(s, g) == doctest::Approx(1.0).epsilon(1e-15));
}

TEST_CASE("cubic exact on minimal Simpson grid") {
  UniformGrid g(0, 1, 5);
  auto s = sample(g, [](double x) { return x * x * x; });
  CHECK(std::fabs(quad::integrate(s, g) - 0.25) <= 1e-14);
}

TEST_CASE("cubic exact on even node counts (3/8 fallback)") {
  for (int n : {4, 6, 10, 64}) {
    UniformGrid g(0, 1, n);
    auto s = sample(g, [](double x) { return 2 * x * x * x - x * x + 3 * x - 1; });
    // exact: 1/2 - 1/3 + 3/2 - 1 = 2/3
    CHECK(std::fabs(quad::integrate(s, g) - 2.0 / 3.0) <= 1e-14);
  }
}

TEST_CASE("full period of sine vanishes") {
  UniformGrid g(0, 1, 257);
  auto s = sample(g, [](double x) { return std::sin(2 * std::numbers::pi * x); });
  const double coarse = quad::integrate(s, g);
  UniformGrid fine(0, 1, 4097);
  auto sf = sample(fine, [](double x) { return std::sin(2 * std::numbers::pi * x); });
  // richer-grid oracle agrees and both sit at zero
  CHECK(std::fabs(coarse - quad::integrate(sf, fine)) <= 1e-12);
  CHECK(std::fabs(coarse) <= 1e-12);
}

TEST_CASE("split endpoints") {
  UniformGrid g(0, 1, 9);
  auto s = sample(g, [](double x) { return x; });
  auto [l0, r0] = quad::integrate_split(s, g, 0);
  CHECK(l0 == 0.0);
  CHECK(r0 == doctest::Approx(0.5).epsilon(1e-14));
  auto [ln, rn] = quad::integrate_split(s, g, 8);
  CHECK(rn == 0.0);
  CHECK(ln == doctest::Approx(0.5).epsilon(1e-14));
}

TEST_CASE("split of linear function at midpoint") {
  UniformGrid g(0, 1, 9);
  auto s = sample(g, [](double x) { return x; });
  auto [left, right] = quad::integrate_split(s, g, 4);
  CHECK(std::fabs(left - 0.125) <= 1e-14);
  CHECK(std::fabs(right - 0.375) <= 1e-14);
}

TEST_CASE("additivity and exactness for cubics at every split index") {
  std::mt19937 rng(42);
  std::uniform_real_distribution<double> coeff(-2.0, 2.0);
  for (int n : {9, 10, 33}) {
    UniformGrid g(-0.5, 1.5, n);
    const double a = coeff(rng), b = coeff(rng), c = coeff(rng), d = coeff(rng);
    std::vector<double> s(n);
    for (int i = 0; i < n; ++i) {
      const double x = g.node(i);
      s[i] = a * x * x * x + b * x * x + c * x + d;
    }
    auto prim = [&](double x) {
      return a * x * x * x * x / 4 + b * x * x * x / 3 + c * x * x / 2 + d * x;
    };
    const double whole = quad::integrate(s, g);
    CHECK(std::fabs(whole - (prim(1.5) - prim(-0.5))) <= 1e-12);
    for (int j = 0; j < n; ++j) {
      auto [left, right] = quad::integrate_split(s, g, j);
      CHECK(std::fabs(left + right - whole) <= 1e-12);
      CHECK(std::fabs(left - (prim(g.node(j)) - prim(-0.5))) <= 1e-12);
    }
  }
}

TEST_CASE("fourth-order convergence on sin(2 pi x)") {
  auto err = [](int n) {
    UniformGrid g(0, 0.37, n);  // partial period so the error is generic
    std::vector<double> s(n);
    for (int i = 0; i < n; ++i) s[i] = std::sin(2 * std::numbers::pi * g.node(i));
    const double exact =
        (1 - std::cos(2 * std::numbers::pi * 0.37)) / (2 * std::numbers::pi);
    return std::fabs(quad::integrate(s, g) - exact);
  };
  const double e33 = err(33), e65 = err(65), e129 = err(129);
  CHECK(e33 / e65 >= 14.0);
  CHECK(e65 / e129 >= 14.0);
}

TEST_CASE("input validation") {
  CHECK_THROWS_AS(UniformGrid(0, 1, 1), std::invalid_argument);
  UniformGrid g(0, 1, 5);
  std::vector<double> s(4, 0.0);
  CHECK_THROWS_AS(quad::integrate(s, g), std::invalid_argument);
  std::vector<double> ok(5, 0.0);
  CHECK_THROWS_AS(quad::integrate_split(ok, g, 5), std::invalid_argument);
}

TEST_CASE("2d norm over a rectangle") {
  // ||sin(2 pi x) * 1||_{L2([0,1]x[0,2])} = sqrt(1/2 * 2) = 1
  UniformGrid xg(0, 1, 129), tg(0, 2, 65);
  const double v = quad::l2_norm_2d(
      [](double x, double) { return std::sin(2 * std::numbers::pi * x); }, xg, tg);
  CHECK(v == doctest::Approx(1.0).epsilon(1e-10));
}
