#pragma once

#include <functional>
#include <optional>
#include <vector>

#include "l2x/common.hpp"
#include "l2x/geometry.hpp"

namespace l2x {

enum class RuleKind { tensor, qmc };

// Nodes and weights for one factor of a product rule, stored explicitly.
// `nodes` is (complex dims) x (node count).
struct FactorRule {
  CMat nodes;
  RVec weights;
  RuleKind kind = RuleKind::tensor;

  int dims() const { return static_cast<int>(nodes.rows()); }
  std::size_t count() const { return static_cast<std::size_t>(nodes.cols()); }
};

// Product rule over the standard cylinder D_r x B_s^{n-1} (or over a single
// disc or ball when built from disc_rule / ball_rule directly). The full
// node set is the cartesian product of the factors and is never
// materialized; node k is decomposed on the fly.
struct QuadratureRule {
  std::vector<FactorRule> factors;
  int level = 0;
  RuleKind kind = RuleKind::tensor;

  int dim() const;
  std::size_t size() const;
  void node(std::size_t k, CVec& w) const;
  double weight(std::size_t k) const;
  double weight_sum() const;
};

// Gauss-Legendre radial nodes (polynomial exactness up to degree
// 2*n_rad - 1 in the radius) tensored with n_ang equispaced angles.
// Exact for z^j conj(z)^k whenever j + k <= 2*n_rad - 2 and
// |j - k| < n_ang; weights are positive and sum to pi r^2.
QuadratureRule disc_rule(double r, int n_rad, int n_ang);

// Rule over the ball B_s^m. m = 1 reduces to a disc; m = 2 uses a radial
// Gauss-Legendre factor tensored with an exact rule on the 3-sphere;
// m >= 3 falls back to Halton points rejected into the ball (kind qmc).
QuadratureRule ball_rule(double s, int m, int level);

// Product of disc and ball factors sized for `level`; per disc factor the
// node counts are n_rad = 3 * 2^level, n_ang = 6 * 2^level.
QuadratureRule cylinder_rule(int n, double r, double s, int level);

// Smallest level whose disc factors integrate monomials of degree N
// against each other exactly.
int level_for_degree(int n, int N);

using Integrand = std::function<cplx(const CVec&)>;

// Integral over the standard coordinates of `rule` (no cylinder pullback).
cplx integrate_raw(const QuadratureRule& rule, const Integrand& f);

// Integral of f over the cylinder c, pulling f back through z = a + A w.
// Throws QuadratureError naming the first offending node if f evaluates
// non-finite. OpenMP parallel over fixed node blocks; the _serial variant
// is the reference implementation.
cplx integrate(const Cylinder& c, const Integrand& f, const QuadratureRule& rule);
cplx integrate_serial(const Cylinder& c, const Integrand& f, const QuadratureRule& rule);

struct IntegrateResult {
  cplx value;    // finer level
  double err;    // |finer - coarser|, or a block variance bound for qmc
  int level = 0;
};

// Two-level error estimate: evaluates at `level` and `level + 1` and
// reports the difference.
IntegrateResult integrate_with_error(const Cylinder& c, const Integrand& f,
                                     int level);

}  // namespace l2x
