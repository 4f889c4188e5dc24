#include "l2x/weight_expr.hpp"

#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdio>

namespace l2x {

namespace {

ExprPtr make_const(cplx v) {
  auto e = std::make_shared<Expr>();
  e->kind = ExprKind::constant;
  e->value = v;
  return e;
}

ExprPtr make_var(int j) {
  auto e = std::make_shared<Expr>();
  e->kind = ExprKind::variable;
  e->var = j;
  return e;
}

ExprPtr make_binary(ExprKind k, ExprPtr l, ExprPtr r) {
  auto e = std::make_shared<Expr>();
  e->kind = k;
  e->lhs = std::move(l);
  e->rhs = std::move(r);
  return e;
}

ExprPtr make_pow(ExprPtr base, int exponent) {
  auto e = std::make_shared<Expr>();
  e->kind = ExprKind::pow;
  e->lhs = std::move(base);
  e->exponent = exponent;
  return e;
}

ExprPtr make_neg(ExprPtr x) {
  auto e = std::make_shared<Expr>();
  e->kind = ExprKind::neg;
  e->lhs = std::move(x);
  return e;
}

ExprPtr make_func(FuncKind f, ExprPtr x) {
  auto e = std::make_shared<Expr>();
  e->kind = ExprKind::func;
  e->func = f;
  e->lhs = std::move(x);
  return e;
}

class Parser {
 public:
  Parser(const std::string& src, int n) : src_(src), n_(n) {}

  ExprPtr run() {
    ExprPtr e = expr();
    skip_ws();
    if (pos_ != src_.size()) fail("unexpected trailing input");
    return e;
  }

 private:
  [[noreturn]] void fail(const std::string& msg) const {
    throw ParseError(msg + " at position " + std::to_string(pos_), pos_);
  }

  void skip_ws() {
    while (pos_ < src_.size() && std::isspace(static_cast<unsigned char>(src_[pos_])))
      ++pos_;
  }

  char peek() {
    skip_ws();
    return pos_ < src_.size() ? src_[pos_] : '\0';
  }

  bool accept(char c) {
    if (peek() == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  ExprPtr expr() {
    ExprPtr e = term();
    for (;;) {
      if (accept('+')) {
        e = make_binary(ExprKind::add, e, term());
      } else if (accept('-')) {
        e = make_binary(ExprKind::sub, e, term());
      } else {
        return e;
      }
    }
  }

  ExprPtr term() {
    ExprPtr e = factor();
    for (;;) {
      if (accept('*')) {
        e = make_binary(ExprKind::mul, e, factor());
      } else if (accept('/')) {
        e = make_binary(ExprKind::div, e, factor());
      } else {
        return e;
      }
    }
  }

  ExprPtr factor() {
    if (accept('-')) return make_neg(factor());
    ExprPtr e = atom();
    if (accept('^')) e = make_pow(e, integer());
    return e;
  }

  int integer() {
    skip_ws();
    std::size_t start = pos_;
    if (pos_ < src_.size() && src_[pos_] == '-') ++pos_;
    while (pos_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_])))
      ++pos_;
    if (pos_ == start || (src_[start] == '-' && pos_ == start + 1))
      fail("exponent must be an integer");
    if (pos_ < src_.size() && (src_[pos_] == '.' || src_[pos_] == 'e' || src_[pos_] == 'E'))
      fail("exponent must be an integer");
    int value = 0;
    auto [p, ec] = std::from_chars(src_.data() + start, src_.data() + pos_, value);
    if (ec != std::errc()) fail("exponent out of range");
    return value;
  }

  ExprPtr atom() {
    skip_ws();
    if (pos_ >= src_.size()) fail("unexpected end of input");
    char c = src_[pos_];
    if (c == '(') {
      ++pos_;
      ExprPtr e = expr();
      if (!accept(')')) fail("expected ')'");
      return e;
    }
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return number();
    if (std::isalpha(static_cast<unsigned char>(c))) return identifier();
    fail(std::string("unexpected character '") + c + "'");
  }

  ExprPtr number() {
    std::size_t start = pos_;
    while (pos_ < src_.size() && (std::isdigit(static_cast<unsigned char>(src_[pos_])) ||
                                  src_[pos_] == '.'))
      ++pos_;
    if (pos_ < src_.size() && (src_[pos_] == 'e' || src_[pos_] == 'E')) {
      std::size_t mark = pos_++;
      if (pos_ < src_.size() && (src_[pos_] == '+' || src_[pos_] == '-')) ++pos_;
      if (pos_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_]))) {
        while (pos_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_])))
          ++pos_;
      } else {
        pos_ = mark;  // the 'e' was not an exponent
      }
    }
    double value = 0.0;
    auto [p, ec] = std::from_chars(src_.data() + start, src_.data() + pos_, value);
    if (ec != std::errc() || p != src_.data() + pos_) fail("malformed number");
    if (pos_ < src_.size() && src_[pos_] == 'i') {
      ++pos_;
      return make_const(cplx(0.0, value));
    }
    return make_const(cplx(value, 0.0));
  }

  ExprPtr identifier() {
    std::size_t start = pos_;
    while (pos_ < src_.size() && std::isalpha(static_cast<unsigned char>(src_[pos_])))
      ++pos_;
    std::string name = src_.substr(start, pos_ - start);
    if (name != "z") {
      // Function names may end in digits (abs2); variable indices are
      // parsed separately below.
      while (pos_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_])))
        ++pos_;
      name = src_.substr(start, pos_ - start);
    }
    if (name == "i") return make_const(cplx(0.0, 1.0));
    if (name == "z") {
      std::size_t istart = pos_;
      while (pos_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_])))
        ++pos_;
      if (pos_ == istart) fail("variable needs an index, e.g. z1");
      int idx = 0;
      std::from_chars(src_.data() + istart, src_.data() + pos_, idx);
      if (idx < 1 || idx > n_)
        fail("variable z" + std::to_string(idx) + " exceeds dimension " +
             std::to_string(n_));
      return make_var(idx - 1);
    }
    FuncKind f;
    if (name == "re") f = FuncKind::re;
    else if (name == "im") f = FuncKind::im;
    else if (name == "abs") f = FuncKind::abs;
    else if (name == "abs2") f = FuncKind::abs2;
    else if (name == "exp") f = FuncKind::exp;
    else if (name == "log") f = FuncKind::log;
    else if (name == "conj") f = FuncKind::conj;
    else fail("unknown function '" + name + "'");
    if (!accept('(')) fail("expected '(' after function name");
    ExprPtr arg = expr();
    if (!accept(')')) fail("expected ')'");
    return make_func(f, arg);
  }

  const std::string& src_;
  int n_;
  std::size_t pos_ = 0;
};

cplx pow_int(cplx base, int e) {
  if (e == 0) return cplx(1.0, 0.0);
  bool inv = e < 0;
  unsigned k = inv ? static_cast<unsigned>(-(long long)e) : static_cast<unsigned>(e);
  cplx acc(1.0, 0.0);
  cplx b = base;
  while (k) {
    if (k & 1u) acc *= b;
    b *= b;
    k >>= 1;
  }
  return inv ? cplx(1.0, 0.0) / acc : acc;
}

cplx eval_node(const Expr& e, const CVec& z) {
  switch (e.kind) {
    case ExprKind::constant: return e.value;
    case ExprKind::variable: return z[e.var];
    case ExprKind::add: return eval_node(*e.lhs, z) + eval_node(*e.rhs, z);
    case ExprKind::sub: return eval_node(*e.lhs, z) - eval_node(*e.rhs, z);
    case ExprKind::mul: return eval_node(*e.lhs, z) * eval_node(*e.rhs, z);
    case ExprKind::div: return eval_node(*e.lhs, z) / eval_node(*e.rhs, z);
    case ExprKind::pow: return pow_int(eval_node(*e.lhs, z), e.exponent);
    case ExprKind::neg: return -eval_node(*e.lhs, z);
    case ExprKind::func: {
      cplx v = eval_node(*e.lhs, z);
      switch (e.func) {
        case FuncKind::re: return cplx(v.real(), 0.0);
        case FuncKind::im: return cplx(v.imag(), 0.0);
        case FuncKind::abs: return cplx(std::abs(v), 0.0);
        case FuncKind::abs2: return cplx(std::norm(v), 0.0);
        case FuncKind::exp: return std::exp(v);
        case FuncKind::log: return std::log(v);
        case FuncKind::conj: return std::conj(v);
      }
    }
  }
  throw Error("eval: corrupt expression node");
}

const char* func_name(FuncKind f) {
  switch (f) {
    case FuncKind::re: return "re";
    case FuncKind::im: return "im";
    case FuncKind::abs: return "abs";
    case FuncKind::abs2: return "abs2";
    case FuncKind::exp: return "exp";
    case FuncKind::log: return "log";
    case FuncKind::conj: return "conj";
  }
  return "?";
}

std::string fmt17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

void print_node(const Expr& e, std::string& out) {
  switch (e.kind) {
    case ExprKind::constant:
      if (e.value.imag() == 0.0) {
        out += fmt17(e.value.real());
      } else if (e.value.real() == 0.0 && e.value.imag() == 1.0) {
        out += "i";
      } else {
        out += fmt17(e.value.imag());
        out += "i";
      }
      return;
    case ExprKind::variable:
      out += "z" + std::to_string(e.var + 1);
      return;
    case ExprKind::add:
    case ExprKind::sub:
    case ExprKind::mul:
    case ExprKind::div: {
      const char op = e.kind == ExprKind::add   ? '+'
                      : e.kind == ExprKind::sub ? '-'
                      : e.kind == ExprKind::mul ? '*'
                                                : '/';
      out += '(';
      print_node(*e.lhs, out);
      out += op;
      print_node(*e.rhs, out);
      out += ')';
      return;
    }
    case ExprKind::pow:
      out += '(';
      print_node(*e.lhs, out);
      out += '^';
      out += std::to_string(e.exponent);
      out += ')';
      return;
    case ExprKind::neg:
      out += "(-";
      print_node(*e.lhs, out);
      out += ')';
      return;
    case ExprKind::func:
      out += func_name(e.func);
      out += '(';
      print_node(*e.lhs, out);
      out += ')';
      return;
  }
}

bool node_smooth(const Expr& e) {
  switch (e.kind) {
    case ExprKind::constant:
    case ExprKind::variable:
      return true;
    case ExprKind::div:
      return false;
    case ExprKind::add:
    case ExprKind::sub:
    case ExprKind::mul:
      return node_smooth(*e.lhs) && node_smooth(*e.rhs);
    case ExprKind::pow:
      return e.exponent >= 0 && node_smooth(*e.lhs);
    case ExprKind::neg:
      return node_smooth(*e.lhs);
    case ExprKind::func:
      if (e.func == FuncKind::abs || e.func == FuncKind::log) return false;
      return node_smooth(*e.lhs);
  }
  return false;
}

bool node_holo_poly(const Expr& e) {
  switch (e.kind) {
    case ExprKind::constant:
    case ExprKind::variable:
      return true;
    case ExprKind::add:
    case ExprKind::sub:
    case ExprKind::mul:
      return node_holo_poly(*e.lhs) && node_holo_poly(*e.rhs);
    case ExprKind::pow:
      return e.exponent >= 0 && node_holo_poly(*e.lhs);
    case ExprKind::neg:
      return node_holo_poly(*e.lhs);
    case ExprKind::div:
    case ExprKind::func:
      return false;
  }
  return false;
}

}  // namespace

bool expr_equal(const ExprPtr& a, const ExprPtr& b) {
  if (!a || !b) return a == b;
  if (a->kind != b->kind) return false;
  switch (a->kind) {
    case ExprKind::constant:
      return a->value == b->value;
    case ExprKind::variable:
      return a->var == b->var;
    case ExprKind::pow:
      return a->exponent == b->exponent && expr_equal(a->lhs, b->lhs);
    case ExprKind::neg:
      return expr_equal(a->lhs, b->lhs);
    case ExprKind::func:
      return a->func == b->func && expr_equal(a->lhs, b->lhs);
    default:
      return expr_equal(a->lhs, b->lhs) && expr_equal(a->rhs, b->rhs);
  }
}

cplx WeightExpr::eval(const CVec& z) const {
  if (static_cast<int>(z.size()) != n_)
    throw DimensionError("WeightExpr::eval: dimension mismatch");
  if (!ast_) throw Error("WeightExpr::eval: empty expression");
  return eval_node(*ast_, z);
}

std::string WeightExpr::print() const {
  std::string out;
  if (ast_) print_node(*ast_, out);
  return out;
}

bool WeightExpr::smooth_hint() const { return ast_ && node_smooth(*ast_); }

bool WeightExpr::holomorphic_polynomial() const {
  return ast_ && node_holo_poly(*ast_);
}

WeightExpr parse_weight_expr(const std::string& source, int n) {
  if (n < 1) throw DimensionError("parse_weight_expr: n must be positive");
  Parser p(source, n);
  return WeightExpr(source, p.run(), n);
}

}  // namespace l2x
