#pragma once

#include <vector>

#include "l2x/common.hpp"
#include "l2x/geometry.hpp"
#include "l2x/quadrature.hpp"
#include "l2x/weights.hpp"

namespace l2x {

using MultiIndex = std::vector<int>;

// Multi-indices with |alpha| <= N in graded lexicographic order: degree
// first, then lexicographically with earlier coordinates major. The zero
// index comes first.
std::vector<MultiIndex> graded_monomials(int n, int N);

// Gram matrix of the monomials w^alpha in the weighted inner product
// <f, g> = integral over the standard cylinder of f conj(g) e^{-psi},
// where psi(w) = phi(a + A w). The stored basis is radius-scaled,
// m_alpha(w) = prod_j (w_j / rho_j)^alpha_j with rho = (r, s, ..., s),
// which keeps the matrix well conditioned at small radii; `scale` holds
// rho^alpha so callers can convert coefficients back to plain monomials.
struct GramSystem {
  int n = 0;
  int degree = 0;
  std::vector<MultiIndex> basis;
  RVec scale;
  CMat G;
  double cond_estimate = 0.0;
  std::vector<int> degree_offsets;  // basis index where each degree starts

  int dim() const { return static_cast<int>(basis.size()); }
  int dim_at_degree(int N) const;

  // Cholesky state, filled by factor(). `fwd` is L^{-1} e_0, whose prefix
  // sums of squared magnitudes give the constrained minimum at every
  // truncation degree from one factorization.
  bool factored = false;
  CMat chol;
  CVec fwd;
  RVec prefix;

  void factor();
};

// Minimizer of the weighted norm over polynomials of degree <= N with
// f(a) = 1, in cylinder coordinates.
struct ExtremalFunction {
  int n = 0;
  int degree = 0;
  std::vector<MultiIndex> basis;  // truncated to dim(degree)
  CVec coeffs_scaled;             // in the radius-scaled basis
  RVec scale;
  double norm_sq = 0.0;

  // Plain monomial coefficient of w^alpha at basis position k.
  cplx coeff(int k) const { return coeffs_scaled[k] / scale[k]; }

  // Evaluates the minimizer at a point z given the cylinder it was
  // computed on.
  cplx eval(const Cylinder& c, const CVec& z) const;
};

// Assembles the Gram matrix with the given rule. The parallel version
// accumulates fixed node blocks with rank-k updates; the serial version is
// the reference implementation with identical block order.
GramSystem assemble_gram(const Cylinder& c, const Weight& w, int N,
                         const QuadratureRule& rule);
GramSystem assemble_gram_serial(const Cylinder& c, const Weight& w, int N,
                                const QuadratureRule& rule);

// Solves the constrained minimization at truncation degree N (defaults to
// g.degree). Throws SolveError when the matrix is not numerically positive
// definite or the condition estimate exceeds 1e12.
ExtremalFunction min_extension(GramSystem& g, int N = -1);

// 1 / min_extension(g, N).norm_sq, from the same factorization.
double kernel_diag(GramSystem& g, int N = -1);

// Minimum norms for every truncation degree 0..g.degree. Nonincreasing by
// construction.
RVec norm_sq_by_degree(GramSystem& g);

}  // namespace l2x
