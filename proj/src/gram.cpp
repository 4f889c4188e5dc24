#include "l2x/gram.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <Eigen/Dense>

#include "l2x/parallel.hpp"

namespace l2x {

namespace {

void enumerate_degree(int n, int d, MultiIndex& cur, int pos, int left,
                      std::vector<MultiIndex>& out) {
  if (pos == n - 1) {
    cur[pos] = left;
    out.push_back(cur);
    return;
  }
  for (int k = left; k >= 0; --k) {
    cur[pos] = k;
    enumerate_degree(n, d, cur, pos + 1, left - k, out);
  }
}

struct GramPartial {
  CMat G;
  std::size_t bad = std::numeric_limits<std::size_t>::max();
  std::string msg;
};

// Tables for evaluating all monomials at a node with one multiply each:
// monomial alpha equals coordinate `coord` times the monomial at `parent`.
struct MonomialPlan {
  std::vector<int> parent;
  std::vector<int> coord;
};

MonomialPlan make_plan(int n, const std::vector<MultiIndex>& basis) {
  MonomialPlan plan;
  const int dim = static_cast<int>(basis.size());
  plan.parent.assign(dim, -1);
  plan.coord.assign(dim, -1);
  auto find = [&](const MultiIndex& a) {
    for (int i = 0; i < dim; ++i)
      if (basis[i] == a) return i;
    return -1;
  };
  for (int i = 1; i < dim; ++i) {
    MultiIndex a = basis[i];
    for (int j = 0; j < n; ++j) {
      if (a[j] > 0) {
        a[j] -= 1;
        plan.coord[i] = j;
        plan.parent[i] = find(a);
        break;
      }
    }
    if (plan.parent[i] < 0) throw Error("gram: basis is not downward closed");
  }
  return plan;
}

GramSystem assemble_impl(const Cylinder& c, const Weight& w, int N,
                         const QuadratureRule& rule, bool parallel) {
  const int n = c.n();
  if (w.n != n) throw DimensionError("assemble_gram: weight dimension mismatch");
  if (rule.dim() != n) throw DimensionError("assemble_gram: rule dimension mismatch");
  if (N < 0) throw Error("assemble_gram: degree must be nonnegative");

  GramSystem g;
  g.n = n;
  g.degree = N;
  g.basis = graded_monomials(n, N);
  const int dim = g.dim();
  if (dim > 512) throw Error("assemble_gram: basis too large");

  g.degree_offsets.assign(N + 2, 0);
  for (int i = 0; i < dim; ++i) {
    int deg = 0;
    for (int v : g.basis[i]) deg += v;
    g.degree_offsets[deg + 1] = i + 1;
  }
  for (int d = 1; d <= N + 1; ++d)
    g.degree_offsets[d] = std::max(g.degree_offsets[d], g.degree_offsets[d - 1]);

  g.scale.resize(dim);
  for (int i = 0; i < dim; ++i) {
    double sc = 1.0;
    for (int j = 0; j < n; ++j) {
      const double rho = j == 0 ? c.r : c.s;
      for (int k = 0; k < g.basis[i][j]; ++k) sc *= rho;
    }
    g.scale[i] = sc;
  }

  const MonomialPlan plan = make_plan(n, g.basis);
  const std::size_t count = rule.size();

  auto block = [&](std::size_t, std::size_t lo, std::size_t hi) {
    GramPartial p;
    p.G = CMat::Zero(dim, dim);
    const std::size_t cols = hi - lo;
    CMat M(dim, static_cast<Eigen::Index>(cols));
    CVec wnode(n), z(n), scaled(n);
    for (std::size_t k = lo; k < hi; ++k) {
      rule.node(k, wnode);
      z.noalias() = c.frame.a * wnode;
      z += c.center;
      double psi;
      try {
        psi = w(z);
      } catch (const std::exception& e) {
        p.bad = k;
        p.msg = e.what();
        return p;
      }
      const double fac = rule.weight(k) * std::exp(-psi);
      if (!std::isfinite(fac)) {
        p.bad = k;
        p.msg = "weight factor non-finite at node " + std::to_string(k);
        return p;
      }
      for (int j = 0; j < n; ++j)
        scaled[j] = wnode[j] / (j == 0 ? c.r : c.s);
      const Eigen::Index col = static_cast<Eigen::Index>(k - lo);
      M(0, col) = std::sqrt(fac);
      for (int i = 1; i < dim; ++i)
        M(i, col) = scaled[plan.coord[i]] * M(plan.parent[i], col);
    }
    p.G.selfadjointView<Eigen::Lower>().rankUpdate(M, 1.0);
    return p;
  };

  auto reduce = [](GramPartial& acc, GramPartial&& p) {
    if (acc.G.size() == 0) acc.G = CMat::Zero(p.G.rows(), p.G.cols());
    acc.G += p.G;
    if (acc.bad == std::numeric_limits<std::size_t>::max() &&
        p.bad != std::numeric_limits<std::size_t>::max()) {
      acc.bad = p.bad;
      acc.msg = std::move(p.msg);
    }
  };

  GramPartial init;
  init.G = CMat::Zero(dim, dim);
  GramPartial total = parallel
      ? par::block_reduce(count, par::kBlockSize, std::move(init), block, reduce)
      : par::block_reduce_serial(count, par::kBlockSize, std::move(init), block,
                                 reduce);
  if (total.bad != std::numeric_limits<std::size_t>::max())
    throw QuadratureError("assemble_gram: " + total.msg);

  // Only the lower triangle was accumulated; mirror it.
  g.G = total.G.selfadjointView<Eigen::Lower>();
  return g;
}

}  // namespace

std::vector<MultiIndex> graded_monomials(int n, int N) {
  if (n < 1) throw DimensionError("graded_monomials: n must be positive");
  std::vector<MultiIndex> out;
  MultiIndex cur(n, 0);
  for (int d = 0; d <= N; ++d) enumerate_degree(n, d, cur, 0, d, out);
  return out;
}

int GramSystem::dim_at_degree(int N) const {
  if (N < 0 || N > degree) throw Error("dim_at_degree: degree out of range");
  return degree_offsets[N + 1];
}

void GramSystem::factor() {
  if (factored) return;
  const int d = dim();
  Eigen::LLT<CMat> llt(G);
  if (llt.info() != Eigen::Success)
    throw SolveError(
        "Gram matrix is not positive definite; raise the quadrature level or "
        "lower the degree");
  chol = llt.matrixL();
  double dmin = std::numeric_limits<double>::infinity(), dmax = 0.0;
  for (int i = 0; i < d; ++i) {
    const double v = chol(i, i).real();
    dmin = std::min(dmin, v);
    dmax = std::max(dmax, v);
  }
  cond_estimate = (dmax / dmin) * (dmax / dmin);

  // Forward substitution for L y = e_0, done explicitly so each entry only
  // depends on earlier rows and prefix sums are truncation-consistent.
  fwd.resize(d);
  for (int i = 0; i < d; ++i) {
    cplx v = i == 0 ? cplx(1.0, 0.0) : cplx(0.0, 0.0);
    for (int j = 0; j < i; ++j) v -= chol(i, j) * fwd[j];
    fwd[i] = v / chol(i, i);
  }
  prefix.resize(d);
  double acc = 0.0;
  for (int i = 0; i < d; ++i) {
    acc += std::norm(fwd[i]);
    prefix[i] = acc;
  }
  factored = true;
}

GramSystem assemble_gram(const Cylinder& c, const Weight& w, int N,
                         const QuadratureRule& rule) {
  return assemble_impl(c, w, N, rule, true);
}

GramSystem assemble_gram_serial(const Cylinder& c, const Weight& w, int N,
                                const QuadratureRule& rule) {
  return assemble_impl(c, w, N, rule, false);
}

ExtremalFunction min_extension(GramSystem& g, int N) {
  if (N < 0) N = g.degree;
  if (N > g.degree) throw Error("min_extension: degree exceeds the assembled basis");
  g.factor();
  if (g.cond_estimate > 1e12)
    throw SolveError("Gram matrix condition estimate " +
                     std::to_string(g.cond_estimate) +
                     " exceeds 1e12; raise the quadrature level or lower the degree");
  const int d = g.dim_at_degree(N);
  const double kd = g.prefix[d - 1];
  if (!(kd > 0.0)) throw SolveError("min_extension: degenerate system");

  // Back substitution L^H x = y on the leading block gives x = G_N^{-1} e_0.
  // With G_jk = <m_j, m_k> the norm of sum c_a m_a is (conj c)^H G (conj c),
  // so the physical coefficients are the conjugate of x scaled to c_0 = 1.
  CVec x(d);
  for (int i = d - 1; i >= 0; --i) {
    cplx v = g.fwd[i];
    for (int j = i + 1; j < d; ++j) v -= std::conj(g.chol(j, i)) * x[j];
    x[i] = v / std::conj(g.chol(i, i));
  }

  ExtremalFunction f;
  f.n = g.n;
  f.degree = N;
  f.basis.assign(g.basis.begin(), g.basis.begin() + d);
  f.coeffs_scaled = (x / x[0]).conjugate();
  f.coeffs_scaled[0] = cplx(1.0, 0.0);  // the constraint holds exactly
  f.scale = g.scale.head(d);
  f.norm_sq = 1.0 / kd;
  return f;
}

double kernel_diag(GramSystem& g, int N) {
  if (N < 0) N = g.degree;
  if (N > g.degree) throw Error("kernel_diag: degree exceeds the assembled basis");
  g.factor();
  return g.prefix[g.dim_at_degree(N) - 1];
}

RVec norm_sq_by_degree(GramSystem& g) {
  g.factor();
  RVec out(g.degree + 1);
  for (int d = 0; d <= g.degree; ++d)
    out[d] = 1.0 / g.prefix[g.dim_at_degree(d) - 1];
  return out;
}

cplx ExtremalFunction::eval(const Cylinder& c, const CVec& z) const {
  if (z.size() != c.center.size())
    throw DimensionError("ExtremalFunction::eval: dimension mismatch");
  // Work in scaled cylinder coordinates for stability.
  CVec w = c.frame.a.adjoint() * (z - c.center);
  for (int j = 0; j < n; ++j) w[j] /= (j == 0 ? c.r : c.s);
  cplx sum(0.0, 0.0);
  const int dim = static_cast<int>(basis.size());
  for (int i = 0; i < dim; ++i) {
    cplx m(1.0, 0.0);
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < basis[i][j]; ++k) m *= w[j];
    sum += coeffs_scaled[i] * m;
  }
  return sum;
}

}  // namespace l2x
