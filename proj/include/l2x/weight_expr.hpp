#pragma once

#include <memory>
#include <string>

#include "l2x/common.hpp"

namespace l2x {

// Expression AST for weight functions of z in C^n.
//
// Grammar:
//   expr   := term (('+' | '-') term)*
//   term   := factor (('*' | '/') factor)*
//   factor := '-' factor | atom ('^' integer)?
//   atom   := number ['i'] | 'i' | 'z' index | func '(' expr ')' | '(' expr ')'
//   func   := re | im | abs | abs2 | exp | log | conj
//
// Numbers are nonnegative decimal literals, optionally with an exponent and
// an 'i' suffix; variables are z1 .. zn.

enum class ExprKind {
  constant,
  variable,
  add,
  sub,
  mul,
  div,
  pow,
  neg,
  func,
};

enum class FuncKind { re, im, abs, abs2, exp, log, conj };

struct Expr;
using ExprPtr = std::shared_ptr<const Expr>;

struct Expr {
  ExprKind kind;
  cplx value;          // constant
  int var = 0;         // variable, 0-based
  int exponent = 0;    // pow
  FuncKind func = FuncKind::re;
  ExprPtr lhs, rhs;
};

bool expr_equal(const ExprPtr& a, const ExprPtr& b);

struct ParseError : Error {
  ParseError(const std::string& msg, std::size_t position)
      : Error(msg), position(position) {}
  std::size_t position;
};

class WeightExpr {
 public:
  WeightExpr() = default;
  WeightExpr(std::string source, ExprPtr ast, int n)
      : source_(std::move(source)), ast_(std::move(ast)), n_(n) {}

  const std::string& source() const { return source_; }
  const ExprPtr& ast() const { return ast_; }
  int n() const { return n_; }

  cplx eval(const CVec& z) const;

  // Canonical fully parenthesized form; parsing it reproduces the AST.
  std::string print() const;

  // True when the AST avoids abs, log and division, in which case the
  // evaluation is real analytic wherever it is finite.
  bool smooth_hint() const;

  // True when only +, -, *, integer powers >= 0 and constants/variables
  // appear, so the expression is a polynomial in z (not conj(z)).
  bool holomorphic_polynomial() const;

 private:
  std::string source_;
  ExprPtr ast_;
  int n_ = 0;
};

// Parses `source` as a weight expression in n variables. Throws ParseError
// with a character position on malformed input, unknown functions,
// out-of-range variable indices, or non-integer exponents.
WeightExpr parse_weight_expr(const std::string& source, int n);

}  // namespace l2x
