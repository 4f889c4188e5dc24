#pragma once

#include <string>
#include <vector>

#include "l2x/common.hpp"
#include "l2x/geometry.hpp"
#include "l2x/gram.hpp"
#include "l2x/weight_expr.hpp"

namespace l2x {

// Sparse holomorphic polynomial in z, used for twist exponents.
struct Poly {
  struct Term {
    MultiIndex alpha;
    cplx coeff;
  };
  int n = 1;
  std::vector<Term> terms;
  std::string source;  // printable form

  cplx eval(const CVec& z) const;
  int degree() const;

  static Poly zero(int n);
  static Poly monomial(int n, MultiIndex alpha, cplx coeff);

  // Parses an expression restricted to +, -, *, integer powers >= 0,
  // constants and variables.
  static Poly parse(const std::string& source, int n);
};

// Dense polynomial truncated at a total degree, over the graded monomial
// basis; enough machinery to expand exp(p) composed with an affine map.
class TruncPoly {
 public:
  TruncPoly(int n, int max_degree);

  int n() const { return n_; }
  int max_degree() const { return max_degree_; }
  const std::vector<MultiIndex>& basis() const { return basis_; }
  cplx coeff(int k) const { return c_[k]; }
  cplx& coeff(int k) { return c_[k]; }
  int dim() const { return static_cast<int>(basis_.size()); }

  TruncPoly& add(const TruncPoly& other, cplx scale = cplx(1.0, 0.0));
  TruncPoly mul(const TruncPoly& other) const;

  // Substitutes z = a + A w into p(z) and truncates; the result is a
  // polynomial in w.
  static TruncPoly compose_affine(const Poly& p, const CVec& a, const CMat& A,
                                  int max_degree);

  // exp(p) as a truncated series; requires p(0) = 0.
  TruncPoly exp_series() const;

 private:
  int index_of(const MultiIndex& alpha) const;

  int n_;
  int max_degree_;
  std::vector<MultiIndex> basis_;
  std::vector<cplx> c_;
};

}  // namespace l2x
