#include "nlwave/expr.hpp"

#include <cctype>
#include <cmath>
#include <cstdlib>
#include <numbers>
#include <sstream>
#include <vector>

namespace nlwave {

namespace detail {

enum class Kind { Constant, Variable, Negate, Add, Sub, Mul, Div, Pow, Call };
enum class Fn { Sin, Cos, Tan, Exp, Log, Sqrt, Abs };

struct ExprNode {
  Kind kind;
  double value = 0.0;  // Constant
  char var = 'x';      // Variable
  Fn fn = Fn::Sin;     // Call
  std::size_t src_offset = SIZE_MAX;  // division operator position, when parsed
  Expr a, b;
};

namespace {

Expr make(Kind k, Expr a = {}, Expr b = {}) {
  auto n = std::make_shared<ExprNode>();
  n->kind = k;
  n->a = std::move(a);
  n->b = std::move(b);
  return Expr(std::move(n));
}

const char* fn_name(Fn f) {
  switch (f) {
    case Fn::Sin: return "sin";
    case Fn::Cos: return "cos";
    case Fn::Tan: return "tan";
    case Fn::Exp: return "exp";
    case Fn::Log: return "log";
    case Fn::Sqrt: return "sqrt";
    case Fn::Abs: return "abs";
  }
  return "?";
}

double apply_fn(Fn f, double v) {
  switch (f) {
    case Fn::Sin: return std::sin(v);
    case Fn::Cos: return std::cos(v);
    case Fn::Tan: return std::tan(v);
    case Fn::Exp: return std::exp(v);
    case Fn::Log: return std::log(v);
    case Fn::Sqrt: return std::sqrt(v);
    case Fn::Abs: return std::fabs(v);
  }
  return 0.0;
}

}  // namespace
}  // namespace detail

using detail::ExprNode;
using detail::Fn;
using detail::Kind;

bool Expr::is_constant(double* value) const {
  if (!node_ || node_->kind != Kind::Constant) return false;
  if (value) *value = node_->value;
  return true;
}

bool Expr::depends_on(char var) const {
  if (!node_) return false;
  const ExprNode& n = *node_;
  switch (n.kind) {
    case Kind::Constant: return false;
    case Kind::Variable: return n.var == var;
    case Kind::Negate:
    case Kind::Call: return n.a.depends_on(var);
    default: return n.a.depends_on(var) || n.b.depends_on(var);
  }
}

Expr Expr::constant(double v) {
  auto n = std::make_shared<ExprNode>();
  n->kind = Kind::Constant;
  n->value = v;
  return Expr(std::move(n));
}

Expr Expr::variable(char name) {
  if (name != 'x' && name != 't') throw std::invalid_argument("Expr::variable: only x and t exist");
  auto n = std::make_shared<ExprNode>();
  n->kind = Kind::Variable;
  n->var = name;
  return Expr(std::move(n));
}

Expr operator+(const Expr& a, const Expr& b) {
  double ca, cb;
  if (a.is_constant(&ca) && b.is_constant(&cb)) return Expr::constant(ca + cb);
  if (a.is_constant(&ca) && ca == 0.0) return b;
  if (b.is_constant(&cb) && cb == 0.0) return a;
  return detail::make(Kind::Add, a, b);
}

Expr operator-(const Expr& a, const Expr& b) {
  double ca, cb;
  if (a.is_constant(&ca) && b.is_constant(&cb)) return Expr::constant(ca - cb);
  if (b.is_constant(&cb) && cb == 0.0) return a;
  return detail::make(Kind::Sub, a, b);
}

Expr operator*(const Expr& a, const Expr& b) {
  double ca, cb;
  if (a.is_constant(&ca) && b.is_constant(&cb)) return Expr::constant(ca * cb);
  if (a.is_constant(&ca)) {
    if (ca == 0.0) return Expr::constant(0.0);
    if (ca == 1.0) return b;
  }
  if (b.is_constant(&cb)) {
    if (cb == 0.0) return Expr::constant(0.0);
    if (cb == 1.0) return a;
  }
  return detail::make(Kind::Mul, a, b);
}

Expr operator/(const Expr& a, const Expr& b) {
  double ca, cb;
  if (b.is_constant(&cb) && cb == 1.0) return a;
  if (a.is_constant(&ca) && b.is_constant(&cb) && cb != 0.0) return Expr::constant(ca / cb);
  return detail::make(Kind::Div, a, b);
}

Expr operator-(const Expr& a) {
  double ca;
  if (a.is_constant(&ca)) return Expr::constant(-ca);
  if (a.node() && a.node()->kind == Kind::Negate) return a.node()->a;
  return detail::make(Kind::Negate, a);
}

Expr Expr::pow(const Expr& base, const Expr& exponent) {
  double cb, ce;
  if (!exponent.is_constant(&ce))
    throw std::invalid_argument("Expr::pow: exponent must be constant");
  if (ce == 0.0) return Expr::constant(1.0);
  if (ce == 1.0) return base;
  if (base.is_constant(&cb)) return Expr::constant(std::pow(cb, ce));
  return detail::make(Kind::Pow, base, exponent);
}

namespace {
Expr make_call(Fn f, const Expr& a) {
  double ca;
  if (a.is_constant(&ca)) return Expr::constant(detail::apply_fn(f, ca));
  auto n = std::make_shared<ExprNode>();
  n->kind = Kind::Call;
  n->fn = f;
  n->a = a;
  return Expr(std::move(n));
}
}  // namespace

Expr Expr::sin(const Expr& a) { return make_call(Fn::Sin, a); }
Expr Expr::cos(const Expr& a) { return make_call(Fn::Cos, a); }
Expr Expr::tan(const Expr& a) { return make_call(Fn::Tan, a); }
Expr Expr::exp(const Expr& a) { return make_call(Fn::Exp, a); }
Expr Expr::log(const Expr& a) { return make_call(Fn::Log, a); }
Expr Expr::sqrt(const Expr& a) { return make_call(Fn::Sqrt, a); }
Expr Expr::abs(const Expr& a) { return make_call(Fn::Abs, a); }

double Expr::eval(const Bindings& b) const {
  if (!node_) throw EvalError("eval of empty expression");
  const ExprNode& n = *node_;
  switch (n.kind) {
    case Kind::Constant: return n.value;
    case Kind::Variable: {
      const std::optional<double>& v = (n.var == 'x') ? b.x : b.t;
      if (!v) throw UnboundVariable(std::string("unbound variable '") + n.var + "'");
      return *v;
    }
    case Kind::Negate: return -n.a.eval(b);
    case Kind::Add: return n.a.eval(b) + n.b.eval(b);
    case Kind::Sub: return n.a.eval(b) - n.b.eval(b);
    case Kind::Mul: return n.a.eval(b) * n.b.eval(b);
    case Kind::Div: {
      double num = n.a.eval(b), den = n.b.eval(b);
      double r = num / den;
      if (!std::isfinite(r)) {
        std::string where = n.src_offset == SIZE_MAX
                                ? std::string()
                                : " (operator at offset " + std::to_string(n.src_offset) + ")";
        throw EvalError("division produced a non-finite value" + where);
      }
      return r;
    }
    case Kind::Pow: {
      double r = std::pow(n.a.eval(b), n.b.eval(b));
      if (!std::isfinite(r)) throw EvalError("power produced a non-finite value");
      return r;
    }
    case Kind::Call: {
      double r = detail::apply_fn(n.fn, n.a.eval(b));
      if (!std::isfinite(r))
        throw EvalError(std::string(detail::fn_name(n.fn)) + " produced a non-finite value");
      return r;
    }
  }
  throw EvalError("corrupt expression node");
}

Expr Expr::diff(char var) const {
  if (!node_) throw NonDifferentiable("diff of empty expression");
  const ExprNode& n = *node_;
  switch (n.kind) {
    case Kind::Constant: return constant(0.0);
    case Kind::Variable: return constant(n.var == var ? 1.0 : 0.0);
    case Kind::Negate: return -n.a.diff(var);
    case Kind::Add: return n.a.diff(var) + n.b.diff(var);
    case Kind::Sub: return n.a.diff(var) - n.b.diff(var);
    case Kind::Mul: return n.a.diff(var) * n.b + n.a * n.b.diff(var);
    case Kind::Div:
      return (n.a.diff(var) * n.b - n.a * n.b.diff(var)) / (n.b * n.b);
    case Kind::Pow: {
      double c = 0.0;
      n.b.is_constant(&c);  // parse/build invariant: exponent is constant
      return constant(c) * pow(n.a, constant(c - 1.0)) * n.a.diff(var);
    }
    case Kind::Call: {
      Expr u = n.a, du = n.a.diff(var);
      switch (n.fn) {
        case Fn::Sin: return cos(u) * du;
        case Fn::Cos: return -(sin(u) * du);
        case Fn::Tan: return du / (cos(u) * cos(u));
        case Fn::Exp: return exp(u) * du;
        case Fn::Log: return du / u;
        case Fn::Sqrt: return du / (constant(2.0) * sqrt(u));
        case Fn::Abs: throw NonDifferentiable("abs is not differentiable");
      }
    }
  }
  throw NonDifferentiable("corrupt expression node");
}

namespace {

int precedence(Kind k) {
  switch (k) {
    case Kind::Add:
    case Kind::Sub: return 1;
    case Kind::Mul:
    case Kind::Div: return 2;
    case Kind::Negate: return 3;
    case Kind::Pow: return 4;
    default: return 5;
  }
}

void print_node(std::ostream& os, const Expr& e, int parent_prec, bool right_side);

void print_number(std::ostream& os, double v) {
  std::ostringstream tmp;
  tmp.precision(17);
  tmp << v;
  os << tmp.str();
}

void print_node(std::ostream& os, const Expr& e, int parent_prec, bool right_side) {
  const ExprNode& n = *e.node();
  int prec = precedence(n.kind);
  bool paren = prec < parent_prec || (prec == parent_prec && right_side && prec <= 2);
  // negative literals need parens in the same places a unary minus would
  if (n.kind == Kind::Constant && n.value < 0.0) paren = parent_prec > 1;
  if (paren) os << '(';
  switch (n.kind) {
    case Kind::Constant: print_number(os, n.value); break;
    case Kind::Variable: os << n.var; break;
    case Kind::Negate:
      os << '-';
      print_node(os, n.a, 3, true);
      break;
    case Kind::Add:
      print_node(os, n.a, 1, false);
      os << '+';
      print_node(os, n.b, 1, true);
      break;
    case Kind::Sub:
      print_node(os, n.a, 1, false);
      os << '-';
      print_node(os, n.b, 1, true);
      break;
    case Kind::Mul:
      print_node(os, n.a, 2, false);
      os << '*';
      print_node(os, n.b, 2, true);
      break;
    case Kind::Div:
      print_node(os, n.a, 2, false);
      os << '/';
      print_node(os, n.b, 2, true);
      break;
    case Kind::Pow:
      print_node(os, n.a, 5, false);  // base binds tightest
      os << '^';
      print_node(os, n.b, 4, false);
      break;
    case Kind::Call:
      os << detail::fn_name(n.fn) << '(';
      print_node(os, n.a, 0, false);
      os << ')';
      break;
  }
  if (paren) os << ')';
}

}  // namespace

std::string Expr::str() const {
  if (!node_) return "";
  std::ostringstream os;
  print_node(os, *this, 0, false);
  return os.str();
}

// ---------------------------------------------------------------------------
// parser

namespace {

// re-tag a freshly built division node with the operator's byte offset
Expr with_div_offset(const Expr& e, std::size_t offset) {
  if (!e.node() || e.node()->kind != Kind::Div) return e;  // folded to a constant
  auto n = std::make_shared<ExprNode>(*e.node());
  n->src_offset = offset;
  return Expr(std::move(n));
}

struct Parser {
  std::string_view text;
  std::size_t pos = 0;

  [[noreturn]] void fail(std::size_t at, const std::string& msg,
                         std::vector<std::string> expected) {
    throw ParseError(msg + " at offset " + std::to_string(at), at, std::move(expected));
  }

  void skip_ws() {
    while (pos < text.size() && std::isspace(static_cast<unsigned char>(text[pos]))) ++pos;
  }

  bool peek(char c) {
    skip_ws();
    return pos < text.size() && text[pos] == c;
  }

  bool accept(char c) {
    if (peek(c)) {
      ++pos;
      return true;
    }
    return false;
  }

  Expr parse() {
    skip_ws();
    if (pos >= text.size()) fail(0, "empty expression", {"expression"});
    Expr e = parse_sum();
    skip_ws();
    if (pos < text.size())
      fail(pos, std::string("unexpected '") + text[pos] + "'", {"operator", "end of input"});
    return e;
  }

  Expr parse_sum() {
    Expr e = parse_term();
    for (;;) {
      if (accept('+')) e = e + parse_term();
      else if (peek('-')) { ++pos; e = e - parse_term(); }
      else return e;
    }
  }

  Expr parse_term() {
    Expr e = parse_unary();
    for (;;) {
      skip_ws();
      if (pos < text.size() && text[pos] == '*') {
        if (pos + 1 < text.size() && text[pos + 1] == '*')
          fail(pos, "'**' is not an operator (use '^')", {"*", "/", "+", "-", "^"});
        ++pos;
        e = e * parse_unary();
      } else if (pos < text.size() && text[pos] == '/') {
        const std::size_t at = pos;
        ++pos;
        e = with_div_offset(e / parse_unary(), at);
      } else {
        return e;
      }
    }
  }

  Expr parse_unary() {
    skip_ws();
    if (pos < text.size() && text[pos] == '-') {
      ++pos;
      return -parse_unary();
    }
    return parse_power();
  }

  Expr parse_power() {
    Expr base = parse_atom();
    skip_ws();
    if (pos < text.size() && text[pos] == '^') {
      std::size_t caret = pos;
      ++pos;
      Expr exponent = parse_unary();  // right-associative, allows a leading minus
      if (exponent.depends_on('x') || exponent.depends_on('t'))
        fail(caret, "exponent of '^' must be constant", {"constant exponent"});
      return Expr::pow(base, exponent);
    }
    return base;
  }

  Expr parse_atom() {
    skip_ws();
    if (pos >= text.size())
      fail(pos, "unexpected end of input", {"number", "identifier", "("});
    char c = text[pos];
    if (c == '(') {
      ++pos;
      Expr e = parse_sum();
      if (!accept(')')) fail(pos, "expected ')'", {")"});
      return e;
    }
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return parse_number();
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') return parse_identifier();
    fail(pos, std::string("unexpected '") + c + "'", {"number", "identifier", "("});
  }

  Expr parse_number() {
    std::size_t start = pos;
    const char* begin = text.data() + pos;
    char* end = nullptr;
    double v = std::strtod(begin, &end);
    if (end == begin) fail(start, "malformed number", {"number"});
    pos += static_cast<std::size_t>(end - begin);
    return Expr::constant(v);
  }

  Expr parse_identifier() {
    std::size_t start = pos;
    while (pos < text.size() &&
           (std::isalnum(static_cast<unsigned char>(text[pos])) || text[pos] == '_'))
      ++pos;
    std::string name(text.substr(start, pos - start));
    if (name == "pi") return Expr::constant(std::numbers::pi);
    if (name == "e") return Expr::constant(std::numbers::e);
    if (name == "x" || name == "t") return Expr::variable(name[0]);
    static const std::vector<std::pair<std::string, Expr (*)(const Expr&)>> fns = {
        {"sin", &Expr::sin}, {"cos", &Expr::cos},   {"tan", &Expr::tan}, {"exp", &Expr::exp},
        {"log", &Expr::log}, {"sqrt", &Expr::sqrt}, {"abs", &Expr::abs}};
    for (const auto& [fname, maker] : fns) {
      if (name == fname) {
        if (!accept('(')) fail(pos, "expected '(' after function name", {"("});
        Expr arg = parse_sum();
        if (!accept(')')) fail(pos, "expected ')'", {")"});
        return maker(arg);
      }
    }
    fail(start, "unknown identifier '" + name + "'",
         {"pi", "e", "x", "t", "sin", "cos", "tan", "exp", "log", "sqrt", "abs"});
  }
};

}  // namespace

Expr parse_expression(std::string_view text) {
  Parser p{text};
  return p.parse();
}

}  // namespace nlwave
