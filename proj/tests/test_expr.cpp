#include <cmath>
#include <random>

#include "doctest.h"
#include "nlwave/expr.hpp"

using namespace nlwave;

namespace {

double at(const std::string& text, double x = 0.0, double t = 0.0) {
  return parse_expression(text).eval(Bindings::at(x, t));
}

}  // namespace

TEST_CASE("precedence and associativity fixtures") {
  struct Fixture {
    const char* text;
    double x, t, want;
  };
  const Fixture fixtures[] = {
      {"1+2*3", 0, 0, 7},
      {"2*3+1", 0, 0, 7},
      {"1-2-3", 0, 0, -4},
      {"12/4/3", 0, 0, 1},
      {"6/2*3", 0, 0, 9},
      {"2^3^2", 0, 0, 512},  // right-associative
      {"-2^2", 0, 0, -4},    // ^ binds tighter than unary minus
      {"(-2)^2", 0, 0, 4},
      {"2^-2", 0, 0, 0.25},
      {"-x^2", 3, 0, -9},
      {"2*-3", 0, 0, -6},
      {"1 - -2", 0, 0, 3},
      {"--4", 0, 0, 4},
      {"x*t", 2, 3, 6},
      {"x/t", 1, 4, 0.25},
      {"x^2+1", 3, 0, 10},
      {"(1+2)*(3+4)", 0, 0, 21},
      {"2^0.5", 0, 0, std::sqrt(2.0)},
      {"1e3+1", 0, 0, 1001},
      {".5*x", 4, 0, 2},
      {"sin(pi/2)", 0, 0, 1},
      {"cos(0)", 0, 0, 1},
      {"tan(pi/4)", 0, 0, 1},
      {"log(e)", 0, 0, 1},
      {"sqrt(4)", 0, 0, 2},
      {"abs(-3)", 0, 0, 3},
      {"exp(0)", 0, 0, 1},
      {"exp(log(5))", 0, 0, 5},
      {"sqrt(2)^2", 0, 0, 2},
      {"sin(2*pi*x)*cos(t)", 0.25, 0, 1},
      {"2*pi*x", 1, 0, 2 * 3.14159265358979323846},
      {"1+2*3^2", 0, 0, 19},
  };
  for (const Fixture& f : fixtures) {
    CAPTURE(f.text);
    CHECK(at(f.text, f.x, f.t) == doctest::Approx(f.want).epsilon(1e-12));
  }
}

TEST_CASE("parse errors carry byte offsets") {
  try {
    parse_expression("2**x");
    FAIL("expected ParseError");
  } catch (const ParseError& e) {
    CHECK(e.offset == 1);
  }
  CHECK_THROWS_AS(parse_expression(""), ParseError);
  CHECK_THROWS_AS(parse_expression("(1+2"), ParseError);
  CHECK_THROWS_AS(parse_expression("1+"), ParseError);
  CHECK_THROWS_AS(parse_expression("x^t"), ParseError);   // non-constant exponent
  CHECK_THROWS_AS(parse_expression("2^x"), ParseError);
  try {
    parse_expression("foo(3)");
    FAIL("expected ParseError");
  } catch (const ParseError& e) {
    CHECK(e.offset == 0);
    CHECK(!e.expected.empty());
  }
}

TEST_CASE("evaluation errors") {
  Expr e = parse_expression("1/ (x-1)");
  CHECK_THROWS_AS(e.eval(Bindings::at_x(1.0)), EvalError);
  CHECK(e.eval(Bindings::at_x(3.0)) == doctest::Approx(0.5));
  CHECK_THROWS_AS(parse_expression("log(x)").eval(Bindings::at_x(-1.0)), EvalError);
  CHECK_THROWS_AS(parse_expression("x+t").eval(Bindings::at_x(1.0)), UnboundVariable);
}

TEST_CASE("symbolic derivatives") {
  Expr s = parse_expression("sin(t)");
  Expr ds = s.diff('t');
  Expr dds = ds.diff('t');
  for (double t : {0.0, 0.3, 1.7}) {
    CHECK(ds.eval(Bindings::at_t(t)) == doctest::Approx(std::cos(t)).epsilon(1e-14));
    CHECK(dds.eval(Bindings::at_t(t)) == doctest::Approx(-std::sin(t)).epsilon(1e-14));
  }
  CHECK(parse_expression("x^3").diff('x').eval(Bindings::at_x(2.0)) ==
        doctest::Approx(12.0).epsilon(1e-14));
  CHECK_THROWS_AS(parse_expression("abs(x)").diff('x'), NonDifferentiable);
}

TEST_CASE("second derivative matches central differences") {
  Expr e = parse_expression("(x+1)*cos(2*pi*x)");
  Expr d2 = e.diff('x').diff('x');
  const double h = 1e-4;
  for (int i = 0; i <= 100; ++i) {
    const double x = i / 100.0;
    const double fd = (e.eval(Bindings::at_x(x + h)) - 2.0 * e.eval(Bindings::at_x(x)) +
                       e.eval(Bindings::at_x(x - h))) /
                      (h * h);
    CHECK(std::fabs(d2.eval(Bindings::at_x(x)) - fd) <= 1e-6 * std::max(1.0, std::fabs(fd)));
  }
}

TEST_CASE("derivatives of every production vs central differences") {
  const char* cases[] = {
      "sin(2*x)",       "cos(x/2)",     "tan(x/4)",        "exp(x/3)",
      "log(2.5+x)",     "sqrt(2.5+x)",  "x^3",             "x^-2",
      "(x+2)/(3+x)",    "x*sin(x)",     "x-cos(x)",        "-(x*x)",
      "sin(cos(x))+x^2"};
  const double h = 1e-5;
  for (const char* text : cases) {
    CAPTURE(text);
    Expr e = parse_expression(text);
    Expr d = e.diff('x');
    for (double x : {0.31, 0.77, 1.21}) {
      const double fd =
          (e.eval(Bindings::at_x(x + h)) - e.eval(Bindings::at_x(x - h))) / (2 * h);
      const double sym = d.eval(Bindings::at_x(x));
      CHECK(std::fabs(sym - fd) <= 1e-6 * std::max(1.0, std::fabs(sym)));
    }
  }
}

TEST_CASE("print round-trip evaluates identically") {
  const char* cases[] = {"sin(2*pi*x)*cos(t)", "x^2+1",          "1-2-x*t",
                         "-x^2+t/(2.5+x)",     "sqrt(2.5+x)*exp(t/4)",
                         "(x+1)*(t-2)/(x+3)",  "2^-2*x",         "-(x+t)^3"};
  std::mt19937 rng(7);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (const char* text : cases) {
    CAPTURE(text);
    Expr a = parse_expression(text);
    Expr b = parse_expression(a.str());
    CHECK(a.str() == b.str());  // deterministic printing
    for (int i = 0; i < 100; ++i) {
      const Bindings bind = Bindings::at(u(rng), u(rng));
      CHECK(std::fabs(a.eval(bind) - b.eval(bind)) <= 1e-12 * std::max(1.0, std::fabs(a.eval(bind))));
    }
  }
}

TEST_CASE("identical text yields structurally identical trees") {
  Expr a = parse_expression("sin(x)*t + x^2/(1+t)");
  Expr b = parse_expression("sin(x)*t + x^2/(1+t)");
  CHECK(a.str() == b.str());
}

TEST_CASE("division failures report the operator position") {
  Expr e = parse_expression("1 + 2/ (x-1)");
  try {
    e.eval(Bindings::at_x(1.0));
    FAIL("expected EvalError");
  } catch (const EvalError& err) {
    CHECK(std::string(err.what()).find("offset 5") != std::string::npos);
  }
  // programmatically built divisions still fail cleanly, without a position
  Expr built = Expr::variable('x') / (Expr::variable('x') - Expr::constant(1.0));
  CHECK_THROWS_AS(built.eval(Bindings::at_x(1.0)), EvalError);
}
