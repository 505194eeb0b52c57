#include "ribfront/mexpr.hpp"

#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <utility>

namespace ribfront::mexpr {

PoleError::PoleError(Cplx where, const std::string& what)
    : std::runtime_error(what), where_(where) {}

ParseError::ParseError(std::size_t offset, const std::string& what)
    : std::runtime_error("parse error at offset " + std::to_string(offset) + ": " + what),
      offset_(offset) {}

struct Expr::Node {
  Op op = Op::Const;
  Cplx value{};
  double exponent = 0.0;
  bool integer_exponent = false;
  Expr a;  // operands; unused for leaves
  Expr b;
};

Expr::Expr() : node_(nullptr) {}

Expr::Expr(std::shared_ptr<const Node> n) : node_(std::move(n)) {}

Expr Expr::constant(Cplx c) {
  auto n = std::make_shared<Node>();
  n->op = Op::Const;
  n->value = c;
  return Expr(std::move(n));
}

Expr Expr::variable() {
  auto n = std::make_shared<Node>();
  n->op = Op::Var;
  return Expr(std::move(n));
}

// A null node_ stands for the constant 0 so that Node can hold Expr members.
Op Expr::op() const { return node_ ? node_->op : Op::Const; }
Cplx Expr::constant_value() const { return node_ ? node_->value : Cplx{}; }
double Expr::exponent() const { return node_ ? node_->exponent : 0.0; }
bool Expr::integer_exponent() const { return node_ && node_->integer_exponent; }
const Expr& Expr::arg(int i) const { return i == 0 ? node_->a : node_->b; }

namespace {

std::shared_ptr<Expr::Node> make(Op op, const Expr& a, const Expr& b = Expr()) {
  auto n = std::make_shared<Expr::Node>();
  n->op = op;
  n->a = a;
  n->b = b;
  return n;
}

}  // namespace

// Light constant folding keeps derivative trees readable. No further simplification.
Expr operator+(const Expr& a, const Expr& b) {
  if (a.is_constant() && b.is_constant()) return Expr::constant(a.constant_value() + b.constant_value());
  if (a.is_constant(0.0)) return b;
  if (b.is_constant(0.0)) return a;
  return Expr(make(Op::Add, a, b));
}

Expr operator-(const Expr& a, const Expr& b) {
  if (a.is_constant() && b.is_constant()) return Expr::constant(a.constant_value() - b.constant_value());
  if (b.is_constant(0.0)) return a;
  if (a.is_constant(0.0)) return -b;
  return Expr(make(Op::Sub, a, b));
}

Expr operator*(const Expr& a, const Expr& b) {
  if (a.is_constant() && b.is_constant()) return Expr::constant(a.constant_value() * b.constant_value());
  if (a.is_constant(0.0) || b.is_constant(0.0)) return Expr::constant(0.0);
  if (a.is_constant(1.0)) return b;
  if (b.is_constant(1.0)) return a;
  return Expr(make(Op::Mul, a, b));
}

Expr operator/(const Expr& a, const Expr& b) {
  if (b.is_constant(1.0)) return a;
  if (a.is_constant(0.0) && !b.is_constant(0.0)) return Expr::constant(0.0);
  return Expr(make(Op::Div, a, b));
}

Expr operator-(const Expr& a) {
  if (a.is_constant()) return Expr::constant(-a.constant_value());
  if (a.op() == Op::Neg) return a.arg(0);
  return Expr(make(Op::Neg, a));
}

Expr pow(const Expr& base, double exponent) {
  if (exponent == 0.0) return Expr::constant(1.0);
  if (exponent == 1.0) return base;
  auto n = make(Op::Pow, base);
  n->exponent = exponent;
  n->integer_exponent = std::trunc(exponent) == exponent && std::abs(exponent) < 1e9;
  return Expr(std::move(n));
}

Expr exp(const Expr& a) { return Expr(make(Op::Exp, a)); }
Expr log(const Expr& a) { return Expr(make(Op::Log, a)); }

// ---------------------------------------------------------------------------
// Evaluation

namespace {

[[noreturn]] void pole(Cplx z, const char* what) { throw PoleError(z, what); }

Cplx checked_div(Cplx num, Cplx den, Cplx z) {
  if (std::abs(den) < kPoleThreshold * (1.0 + std::abs(num))) pole(z, "division by zero");
  return num / den;
}

Cplx int_pow(Cplx base, long n) {
  Cplx result = 1.0;
  Cplx b = base;
  unsigned long e = static_cast<unsigned long>(n);
  while (e) {
    if (e & 1UL) result *= b;
    b *= b;
    e >>= 1;
  }
  return result;
}

Cplx eval_node(const Expr& e, Cplx z) {
  switch (e.op()) {
    case Op::Const: return e.constant_value();
    case Op::Var: return z;
    case Op::Add: return eval_node(e.arg(0), z) + eval_node(e.arg(1), z);
    case Op::Sub: return eval_node(e.arg(0), z) - eval_node(e.arg(1), z);
    case Op::Mul: return eval_node(e.arg(0), z) * eval_node(e.arg(1), z);
    case Op::Div: {
      const Cplx num = eval_node(e.arg(0), z);
      return checked_div(num, eval_node(e.arg(1), z), z);
    }
    case Op::Neg: return -eval_node(e.arg(0), z);
    case Op::Pow: {
      const Cplx u = eval_node(e.arg(0), z);
      const double p = e.exponent();
      if (e.integer_exponent()) {
        const long n = static_cast<long>(p);
        if (n >= 0) return int_pow(u, n);
        return checked_div(1.0, int_pow(u, -n), z);
      }
      if (u == 0.0) {
        if (p > 0.0) return 0.0;
        pole(z, "negative power of zero");
      }
      if (std::abs(u) < kPoleThreshold && p < 0.0) pole(z, "negative power of zero");
      return std::exp(p * std::log(u));
    }
    case Op::Exp: return std::exp(eval_node(e.arg(0), z));
    case Op::Log: {
      const Cplx u = eval_node(e.arg(0), z);
      if (std::abs(u) < kPoleThreshold) pole(z, "log of zero");
      return std::log(u);
    }
  }
  return 0.0;
}

}  // namespace

Cplx evaluate(const Expr& e, Cplx z) {
  const Cplx v = eval_node(e, z);
  if (!std::isfinite(v.real()) || !std::isfinite(v.imag())) pole(z, "non-finite value");
  return v;
}

std::optional<Cplx> try_evaluate(const Expr& e, Cplx z) {
  try {
    return evaluate(e, z);
  } catch (const PoleError&) {
    return std::nullopt;
  }
}

// ---------------------------------------------------------------------------
// Differentiation and substitution

Expr derivative(const Expr& e) {
  switch (e.op()) {
    case Op::Const: return Expr::constant(0.0);
    case Op::Var: return Expr::constant(1.0);
    case Op::Add: return derivative(e.arg(0)) + derivative(e.arg(1));
    case Op::Sub: return derivative(e.arg(0)) - derivative(e.arg(1));
    case Op::Mul: {
      const Expr& u = e.arg(0);
      const Expr& v = e.arg(1);
      return derivative(u) * v + u * derivative(v);
    }
    case Op::Div: {
      const Expr& u = e.arg(0);
      const Expr& v = e.arg(1);
      if (is_constant_expr(u)) return -(u * derivative(v)) / pow(v, 2.0);
      return (derivative(u) * v - u * derivative(v)) / pow(v, 2.0);
    }
    case Op::Neg: return -derivative(e.arg(0));
    case Op::Pow: {
      const Expr& u = e.arg(0);
      const double p = e.exponent();
      return Expr::constant(p) * pow(u, p - 1.0) * derivative(u);
    }
    case Op::Exp: return e * derivative(e.arg(0));
    case Op::Log: return derivative(e.arg(0)) / e.arg(0);
  }
  return Expr::constant(0.0);
}

Expr substitute(const Expr& e, const Expr& inner) {
  switch (e.op()) {
    case Op::Const: return e;
    case Op::Var: return inner;
    case Op::Add: return substitute(e.arg(0), inner) + substitute(e.arg(1), inner);
    case Op::Sub: return substitute(e.arg(0), inner) - substitute(e.arg(1), inner);
    case Op::Mul: return substitute(e.arg(0), inner) * substitute(e.arg(1), inner);
    case Op::Div: return substitute(e.arg(0), inner) / substitute(e.arg(1), inner);
    case Op::Neg: return -substitute(e.arg(0), inner);
    case Op::Pow: return pow(substitute(e.arg(0), inner), e.exponent());
    case Op::Exp: return exp(substitute(e.arg(0), inner));
    case Op::Log: return log(substitute(e.arg(0), inner));
  }
  return e;
}

bool is_constant_expr(const Expr& e) {
  switch (e.op()) {
    case Op::Const: return true;
    case Op::Var: return false;
    case Op::Add:
    case Op::Sub:
    case Op::Mul:
    case Op::Div: return is_constant_expr(e.arg(0)) && is_constant_expr(e.arg(1));
    default: return is_constant_expr(e.arg(0));
  }
}

// ---------------------------------------------------------------------------
// Printing

namespace {

std::string fmt_real(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

std::string fmt_const(Cplx c) {
  if (c.imag() == 0.0) {
    const std::string s = fmt_real(c.real());
    return c.real() < 0.0 ? "(" + s + ")" : s;
  }
  if (c.real() == 0.0) return "(" + fmt_real(c.imag()) + "i)";
  char buf[90];
  std::snprintf(buf, sizeof buf, "(%.17g%+.17gi)", c.real(), c.imag());
  return buf;
}

std::string fmt_exponent(double p) {
  return p < 0.0 ? "(" + fmt_real(p) + ")" : fmt_real(p);
}

}  // namespace

std::string to_string(const Expr& e) {
  switch (e.op()) {
    case Op::Const: return fmt_const(e.constant_value());
    case Op::Var: return "z";
    case Op::Add: return "(" + to_string(e.arg(0)) + "+" + to_string(e.arg(1)) + ")";
    case Op::Sub: return "(" + to_string(e.arg(0)) + "-" + to_string(e.arg(1)) + ")";
    case Op::Mul: return "(" + to_string(e.arg(0)) + "*" + to_string(e.arg(1)) + ")";
    case Op::Div: return "(" + to_string(e.arg(0)) + "/" + to_string(e.arg(1)) + ")";
    case Op::Neg: return "(-" + to_string(e.arg(0)) + ")";
    case Op::Pow: return "(" + to_string(e.arg(0)) + ")^" + fmt_exponent(e.exponent());
    case Op::Exp: return "exp(" + to_string(e.arg(0)) + ")";
    case Op::Log: return "log(" + to_string(e.arg(0)) + ")";
  }
  return "0";
}

// ---------------------------------------------------------------------------
// Parsing

namespace {

class Parser {
public:
  explicit Parser(std::string_view s) : src_(s) {}

  Expr run() {
    Expr e = expr();
    skip_ws();
    if (pos_ != src_.size()) fail("unexpected '" + std::string(1, src_[pos_]) + "'");
    return e;
  }

private:
  std::string_view src_;
  std::size_t pos_ = 0;

  [[noreturn]] void fail(const std::string& what) const { throw ParseError(pos_, what); }

  void skip_ws() {
    while (pos_ < src_.size() && std::isspace(static_cast<unsigned char>(src_[pos_]))) ++pos_;
  }

  bool accept(char c) {
    skip_ws();
    if (pos_ < src_.size() && src_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  void expect(char c) {
    if (!accept(c)) fail(std::string("expected '") + c + "'");
  }

  Expr expr() {
    Expr e = term();
    for (;;) {
      if (accept('+')) e = e + term();
      else if (accept('-')) e = e - term();
      else return e;
    }
  }

  Expr term() {
    Expr e = unary();
    for (;;) {
      if (accept('*')) e = e * unary();
      else if (accept('/')) e = e / unary();
      else return e;
    }
  }

  Expr unary() {
    if (accept('-')) return -unary();
    if (accept('+')) return unary();
    return power();
  }

  Expr power() {
    Expr base = primary();
    if (accept('^')) return pow(base, exponent());
    return base;
  }

  double exponent() {
    const bool paren = accept('(');
    double sign = 1.0;
    if (accept('-')) sign = -1.0;
    else accept('+');
    skip_ws();
    if (pos_ >= src_.size() || !(std::isdigit(static_cast<unsigned char>(src_[pos_])) || src_[pos_] == '.'))
      fail("exponent must be an integer or real literal");
    const double v = number();
    skip_ws();
    if (pos_ < src_.size() && src_[pos_] == 'i') fail("exponent must be an integer or real literal");
    if (paren) expect(')');
    return sign * v;
  }

  double number() {
    const char* first = src_.data() + pos_;
    const char* last = src_.data() + src_.size();
    double v = 0.0;
    auto [ptr, ec] = std::from_chars(first, last, v);
    if (ec != std::errc()) fail("malformed number");
    pos_ += static_cast<std::size_t>(ptr - first);
    return v;
  }

  std::string_view identifier() {
    const std::size_t start = pos_;
    while (pos_ < src_.size() && std::isalpha(static_cast<unsigned char>(src_[pos_]))) ++pos_;
    return src_.substr(start, pos_ - start);
  }

  Expr primary() {
    skip_ws();
    if (pos_ >= src_.size()) fail("unexpected end of input");
    const char c = src_[pos_];
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
      const double v = number();
      if (pos_ < src_.size() && src_[pos_] == 'i' &&
          !(pos_ + 1 < src_.size() && std::isalpha(static_cast<unsigned char>(src_[pos_ + 1])))) {
        ++pos_;
        return Expr::constant(Cplx(0.0, v));
      }
      return Expr::constant(v);
    }
    if (c == '(') {
      ++pos_;
      Expr e = expr();
      expect(')');
      return e;
    }
    if (std::isalpha(static_cast<unsigned char>(c))) {
      const std::size_t start = pos_;
      const std::string_view id = identifier();
      if (id == "z") return Expr::variable();
      if (id == "i") return Expr::constant(Cplx(0.0, 1.0));
      if (id == "pi") return Expr::constant(std::numbers::pi);
      if (id == "exp" || id == "log") {
        expect('(');
        Expr a = expr();
        expect(')');
        return id == "exp" ? exp(a) : log(a);
      }
      pos_ = start;
      fail("unknown identifier '" + std::string(id) + "'");
    }
    fail("unexpected '" + std::string(1, c) + "'");
  }
};

}  // namespace

Expr parse(std::string_view text) { return Parser(text).run(); }

}  // namespace ribfront::mexpr
