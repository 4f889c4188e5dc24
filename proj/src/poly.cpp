#include "l2x/poly.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>

namespace l2x {

namespace {

cplx pow_nonneg(cplx base, int e) {
  cplx acc(1.0, 0.0);
  for (int i = 0; i < e; ++i) acc *= base;
  return acc;
}

// Folds an AST that passed holomorphic_polynomial() into term form.
std::map<MultiIndex, cplx> fold(const Expr& e, int n) {
  using Terms = std::map<MultiIndex, cplx>;
  switch (e.kind) {
    case ExprKind::constant:
      return {{MultiIndex(n, 0), e.value}};
    case ExprKind::variable: {
      MultiIndex a(n, 0);
      a[e.var] = 1;
      return {{a, cplx(1.0, 0.0)}};
    }
    case ExprKind::add:
    case ExprKind::sub: {
      Terms l = fold(*e.lhs, n);
      const double sgn = e.kind == ExprKind::add ? 1.0 : -1.0;
      for (auto& [a, c] : fold(*e.rhs, n)) l[a] += sgn * c;
      return l;
    }
    case ExprKind::neg: {
      Terms l = fold(*e.lhs, n);
      for (auto& [a, c] : l) c = -c;
      return l;
    }
    case ExprKind::mul: {
      Terms l = fold(*e.lhs, n), r = fold(*e.rhs, n), out;
      for (const auto& [la, lc] : l)
        for (const auto& [ra, rc] : r) {
          MultiIndex a(n);
          for (int j = 0; j < n; ++j) a[j] = la[j] + ra[j];
          out[a] += lc * rc;
        }
      return out;
    }
    case ExprKind::pow: {
      Terms base = fold(*e.lhs, n);
      Terms acc = {{MultiIndex(n, 0), cplx(1.0, 0.0)}};
      for (int i = 0; i < e.exponent; ++i) {
        Terms next;
        for (const auto& [la, lc] : acc)
          for (const auto& [ra, rc] : base) {
            MultiIndex a(n);
            for (int j = 0; j < n; ++j) a[j] = la[j] + ra[j];
            next[a] += lc * rc;
          }
        acc = std::move(next);
      }
      return acc;
    }
    default:
      throw Error("Poly::parse: expression is not a holomorphic polynomial");
  }
}

}  // namespace

cplx Poly::eval(const CVec& z) const {
  if (static_cast<int>(z.size()) != n)
    throw DimensionError("Poly::eval: dimension mismatch");
  cplx sum(0.0, 0.0);
  for (const auto& t : terms) {
    cplx m = t.coeff;
    for (int j = 0; j < n; ++j) m *= pow_nonneg(z[j], t.alpha[j]);
    sum += m;
  }
  return sum;
}

int Poly::degree() const {
  int d = 0;
  for (const auto& t : terms) {
    int td = 0;
    for (int v : t.alpha) td += v;
    d = std::max(d, td);
  }
  return d;
}

Poly Poly::zero(int n) {
  Poly p;
  p.n = n;
  p.source = "0";
  return p;
}

Poly Poly::monomial(int n, MultiIndex alpha, cplx coeff) {
  Poly p;
  p.n = n;
  std::string src;
  if (coeff == cplx(1.0, 0.0)) {
    src = "";
  } else if (coeff == cplx(0.0, 1.0)) {
    src = "i*";
  } else if (coeff.imag() == 0.0) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%g*", coeff.real());
    src = buf;
  } else {
    char buf[48];
    std::snprintf(buf, sizeof(buf), "(%g+%gi)*", coeff.real(), coeff.imag());
    src = buf;
  }
  bool any = false;
  for (int j = 0; j < n; ++j) {
    if (alpha[j] == 0) continue;
    if (any) src += "*";
    src += "z" + std::to_string(j + 1);
    if (alpha[j] > 1) src += "^" + std::to_string(alpha[j]);
    any = true;
  }
  if (!any) src = src.empty() ? "1" : src.substr(0, src.size() - 1);
  p.source = src;
  p.terms.push_back({std::move(alpha), coeff});
  return p;
}

Poly Poly::parse(const std::string& source, int n) {
  WeightExpr e = parse_weight_expr(source, n);
  if (!e.holomorphic_polynomial())
    throw Error("'" + source + "' is not a holomorphic polynomial");
  Poly p;
  p.n = n;
  p.source = source;
  for (auto& [a, c] : fold(*e.ast(), n))
    if (c != cplx(0.0, 0.0)) p.terms.push_back({a, c});
  return p;
}

TruncPoly::TruncPoly(int n, int max_degree)
    : n_(n), max_degree_(max_degree), basis_(graded_monomials(n, max_degree)) {
  c_.assign(basis_.size(), cplx(0.0, 0.0));
}

int TruncPoly::index_of(const MultiIndex& alpha) const {
  for (int i = 0; i < dim(); ++i)
    if (basis_[i] == alpha) return i;
  return -1;
}

TruncPoly& TruncPoly::add(const TruncPoly& other, cplx scale) {
  for (int i = 0; i < dim(); ++i) c_[i] += scale * other.c_[i];
  return *this;
}

TruncPoly TruncPoly::mul(const TruncPoly& other) const {
  TruncPoly out(n_, max_degree_);
  MultiIndex sum(n_);
  for (int i = 0; i < dim(); ++i) {
    if (c_[i] == cplx(0.0, 0.0)) continue;
    for (int j = 0; j < other.dim(); ++j) {
      if (other.c_[j] == cplx(0.0, 0.0)) continue;
      int deg = 0;
      for (int k = 0; k < n_; ++k) {
        sum[k] = basis_[i][k] + other.basis_[j][k];
        deg += sum[k];
      }
      if (deg > max_degree_) continue;
      out.c_[out.index_of(sum)] += c_[i] * other.c_[j];
    }
  }
  return out;
}

TruncPoly TruncPoly::compose_affine(const Poly& p, const CVec& a, const CMat& A,
                                    int max_degree) {
  const int n = p.n;
  // Linear forms a_j + sum_k A(j,k) w_k, raised and multiplied per term.
  std::vector<TruncPoly> linear;
  linear.reserve(n);
  for (int j = 0; j < n; ++j) {
    TruncPoly lin(n, max_degree);
    lin.coeff(0) = a[j];
    for (int k = 0; k < n; ++k) {
      MultiIndex e(n, 0);
      e[k] = 1;
      lin.coeff(lin.index_of(e)) = A(j, k);
    }
    linear.push_back(std::move(lin));
  }
  TruncPoly out(n, max_degree);
  for (const auto& t : p.terms) {
    TruncPoly term(n, max_degree);
    term.coeff(0) = t.coeff;
    for (int j = 0; j < n; ++j)
      for (int e = 0; e < t.alpha[j]; ++e) term = term.mul(linear[j]);
    out.add(term);
  }
  return out;
}

TruncPoly TruncPoly::exp_series() const {
  if (c_[0] != cplx(0.0, 0.0))
    throw Error("exp_series: constant term must vanish");
  TruncPoly out(n_, max_degree_);
  out.coeff(0) = cplx(1.0, 0.0);
  TruncPoly power(n_, max_degree_);
  power.coeff(0) = cplx(1.0, 0.0);
  double fact = 1.0;
  for (int k = 1; k <= max_degree_; ++k) {
    power = power.mul(*this);
    fact *= k;
    out.add(power, cplx(1.0 / fact, 0.0));
  }
  return out;
}

}  // namespace l2x
