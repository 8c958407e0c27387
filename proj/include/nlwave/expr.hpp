#pragma once

#include <memory>
#include <optional>
#include <string>
#include <string_view>

#include "nlwave/errors.hpp"

namespace nlwave {

/// Variable bindings for evaluation. Only the variables x and t exist.
struct Bindings {
  std::optional<double> x;
  std::optional<double> t;
  static Bindings at_x(double x) { return {x, std::nullopt}; }
  static Bindings at_t(double t) { return {std::nullopt, t}; }
  static Bindings at(double x, double t) { return {x, t}; }
};

namespace detail {
struct ExprNode;
}

/// Immutable expression tree over reals, pi, e, variables x/t, + - * / ^,
/// unary minus, and the functions sin cos tan exp log sqrt abs.
/// Exponents of ^ are restricted to constants so differentiation stays total.
class Expr {
 public:
  Expr() = default;

  double eval(const Bindings& b) const;
  double operator()(double x) const { return eval(Bindings::at_x(x)); }

  /// Exact symbolic derivative with respect to 'x' or 't'.
  /// Throws NonDifferentiable if the tree contains abs.
  Expr diff(char var) const;

  /// Parseable text form; parse(str()) evaluates identically.
  std::string str() const;

  bool valid() const { return node_ != nullptr; }
  bool is_constant(double* value = nullptr) const;
  bool depends_on(char var) const;

  // tree builders (constant folding only, no other rewriting)
  static Expr constant(double v);
  static Expr variable(char name);  // 'x' or 't'
  friend Expr operator+(const Expr& a, const Expr& b);
  friend Expr operator-(const Expr& a, const Expr& b);
  friend Expr operator*(const Expr& a, const Expr& b);
  friend Expr operator/(const Expr& a, const Expr& b);
  friend Expr operator-(const Expr& a);
  static Expr pow(const Expr& base, const Expr& exponent);
  static Expr sin(const Expr& a);
  static Expr cos(const Expr& a);
  static Expr tan(const Expr& a);
  static Expr exp(const Expr& a);
  static Expr log(const Expr& a);
  static Expr sqrt(const Expr& a);
  static Expr abs(const Expr& a);

  explicit Expr(std::shared_ptr<const detail::ExprNode> n) : node_(std::move(n)) {}
  const detail::ExprNode* node() const { return node_.get(); }

 private:
  std::shared_ptr<const detail::ExprNode> node_;
};

/// Parse expression text. Precedence ^ > unary minus > * / > + -, with + - * /
/// left-associative and ^ right-associative. Unknown identifiers and
/// variable-dependent exponents are rejected with a byte offset.
Expr parse_expression(std::string_view text);

}  // namespace nlwave
