#pragma once

// Meromorphic expressions in one complex variable z.
//
// Grammar (whitespace ignored):
//
//   expr     = term { ("+" | "-") term } ;
//   term     = unary { ("*" | "/") unary } ;
//   unary    = ("+" | "-") unary | power ;
//   power    = primary [ "^" exponent ] ;
//   exponent = [ "+" | "-" ] number | "(" [ "+" | "-" ] number ")" ;
//   primary  = number [ "i" ] | "i" | "z" | "pi"
//            | ("exp" | "log") "(" expr ")"
//            | "(" expr ")" ;
//   number   = digits [ "." digits ] [ ("e" | "E") [ "+" | "-" ] digits ] ;
//
// A number immediately followed by "i" is an imaginary literal, so the complex
// constant 1+2i is written "1+2i". Exponents must be literals.

#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

#include "ribfront/geom.hpp"

namespace ribfront::mexpr {

/// Raised when evaluation divides by (numerically) zero or takes log(0).
class PoleError : public std::runtime_error {
public:
  PoleError(Cplx where, const std::string& what);
  Cplx where() const { return where_; }

private:
  Cplx where_;
};

class ParseError : public std::runtime_error {
public:
  ParseError(std::size_t offset, const std::string& what);
  std::size_t offset() const { return offset_; }

private:
  std::size_t offset_;
};

enum class Op { Const, Var, Add, Sub, Mul, Div, Neg, Pow, Exp, Log };

/// Immutable expression tree. Copies share structure.
class Expr {
public:
  Expr();  // the constant 0

  static Expr constant(Cplx c);
  static Expr variable();

  Op op() const;
  Cplx constant_value() const;   // Const only
  double exponent() const;       // Pow only
  bool integer_exponent() const; // Pow only
  const Expr& arg(int i) const;  // operand 0 or 1

  bool is_constant() const { return op() == Op::Const; }
  bool is_constant(Cplx c) const { return is_constant() && constant_value() == c; }

  friend Expr operator+(const Expr& a, const Expr& b);
  friend Expr operator-(const Expr& a, const Expr& b);
  friend Expr operator*(const Expr& a, const Expr& b);
  friend Expr operator/(const Expr& a, const Expr& b);
  friend Expr operator-(const Expr& a);
  friend Expr pow(const Expr& base, double exponent);
  friend Expr exp(const Expr& a);
  friend Expr log(const Expr& a);

  struct Node;  // defined in mexpr.cpp

private:
  explicit Expr(std::shared_ptr<const Node> n);
  std::shared_ptr<const Node> node_;
};

Expr operator+(const Expr& a, const Expr& b);
Expr operator-(const Expr& a, const Expr& b);
Expr operator*(const Expr& a, const Expr& b);
Expr operator/(const Expr& a, const Expr& b);
Expr operator-(const Expr& a);
Expr pow(const Expr& base, double exponent);
Expr exp(const Expr& a);
Expr log(const Expr& a);

inline Expr operator+(const Expr& a, Cplx b) { return a + Expr::constant(b); }
inline Expr operator+(Cplx a, const Expr& b) { return Expr::constant(a) + b; }
inline Expr operator-(const Expr& a, Cplx b) { return a - Expr::constant(b); }
inline Expr operator-(Cplx a, const Expr& b) { return Expr::constant(a) - b; }
inline Expr operator*(Cplx a, const Expr& b) { return Expr::constant(a) * b; }
inline Expr operator*(const Expr& a, Cplx b) { return a * Expr::constant(b); }
inline Expr operator/(const Expr& a, Cplx b) { return a / Expr::constant(b); }
inline Expr operator/(Cplx a, const Expr& b) { return Expr::constant(a) / b; }

/// Parses the grammar above. Throws ParseError carrying the byte offset.
Expr parse(std::string_view text);

/// Pole threshold: a quotient n/d signals a pole when |d| < kPoleThreshold * (1 + |n|).
inline constexpr double kPoleThreshold = 1e-13;

/// Value at z. Throws PoleError at (numerical) poles and at log(0).
Cplx evaluate(const Expr& e, Cplx z);
std::optional<Cplx> try_evaluate(const Expr& e, Cplx z);

/// Exact symbolic derivative d/dz.
Expr derivative(const Expr& e);

/// e(inner(z)): every occurrence of z replaced by inner.
Expr substitute(const Expr& e, const Expr& inner);

/// Text in the parse grammar; parse(to_string(e)) evaluates like e.
std::string to_string(const Expr& e);

/// True when the tree does not reference z.
bool is_constant_expr(const Expr& e);

}  // namespace ribfront::mexpr
