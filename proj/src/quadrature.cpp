#include "l2x/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>

#include "l2x/parallel.hpp"

namespace l2x {

namespace {

// Gauss-Legendre nodes and weights on [0, 1], by Newton iteration on the
// Legendre recurrence. Exact for polynomials of degree <= 2m - 1.
void gauss_legendre01(int m, RVec& nodes, RVec& weights) {
  nodes.resize(m);
  weights.resize(m);
  for (int i = 0; i < m; ++i) {
    double x = std::cos(kPi * (i + 0.75) / (m + 0.5));
    double dp = 0.0;
    for (int iter = 0; iter < 100; ++iter) {
      double p0 = 1.0, p1 = x;
      for (int k = 2; k <= m; ++k) {
        const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      dp = m * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-15) break;
    }
    nodes[i] = 0.5 * (x + 1.0);
    weights[i] = 1.0 / ((1.0 - x * x) * dp * dp);
  }
}

double halton(std::size_t index, int base) {
  double f = 1.0, r = 0.0;
  std::size_t i = index;
  while (i > 0) {
    f /= base;
    r += f * static_cast<double>(i % base);
    i /= base;
  }
  return r;
}

constexpr int kPrimes[] = {2,  3,  5,  7,  11, 13, 17, 19, 23, 29,
                           31, 37, 41, 43, 47, 53, 59, 61, 67, 71};

FactorRule disc_factor(double r, int n_rad, int n_ang) {
  if (!(r > 0.0)) throw Error("disc_rule: radius must be positive");
  if (n_rad < 1 || n_ang < 1) throw Error("disc_rule: node counts must be positive");
  RVec t, wt;
  gauss_legendre01(n_rad, t, wt);
  FactorRule f;
  f.nodes.resize(1, static_cast<Eigen::Index>(n_rad) * n_ang);
  f.weights.resize(static_cast<Eigen::Index>(n_rad) * n_ang);
  const double wang = 2.0 * kPi / n_ang;
  Eigen::Index k = 0;
  for (int i = 0; i < n_rad; ++i) {
    // Radial Jacobian t absorbed into the weight; radius scaled by r.
    const double rad = r * t[i];
    const double wr = r * r * t[i] * wt[i] * wang;
    for (int j = 0; j < n_ang; ++j, ++k) {
      const double ang = wang * j;
      f.nodes(0, k) = cplx(rad * std::cos(ang), rad * std::sin(ang));
      f.weights[k] = wr;
    }
  }
  return f;
}

// Rule on the ball B_s^2 in C^2. Coordinates are parameterized as
// (s t sqrt(1-x) e^{i p1}, s t sqrt(x) e^{i p2}) with t, x in [0, 1]; the
// volume element becomes s^4 t^3 dt (dx / 2) dp1 dp2, so Gauss-Legendre in
// t and x with equispaced angles integrates monomials exactly.
FactorRule ball2_factor(double s, int n_t, int n_x, int n_phi) {
  RVec t, wt, x, wx;
  gauss_legendre01(n_t, t, wt);
  gauss_legendre01(n_x, x, wx);
  FactorRule f;
  const std::size_t count =
      static_cast<std::size_t>(n_t) * n_x * n_phi * n_phi;
  f.nodes.resize(2, static_cast<Eigen::Index>(count));
  f.weights.resize(static_cast<Eigen::Index>(count));
  const double wang = 2.0 * kPi / n_phi;
  const double s4 = s * s * s * s;
  Eigen::Index k = 0;
  for (int a = 0; a < n_t; ++a) {
    const double rad = s * t[a];
    const double wrad = s4 * t[a] * t[a] * t[a] * wt[a];
    for (int b = 0; b < n_x; ++b) {
      const double r1 = rad * std::sqrt(1.0 - x[b]);
      const double r2 = rad * std::sqrt(x[b]);
      const double w2 = wrad * 0.5 * wx[b] * wang * wang;
      for (int p = 0; p < n_phi; ++p) {
        const double a1 = wang * p;
        const cplx z1(r1 * std::cos(a1), r1 * std::sin(a1));
        for (int q = 0; q < n_phi; ++q, ++k) {
          const double a2 = wang * q;
          f.nodes(0, k) = z1;
          f.nodes(1, k) = cplx(r2 * std::cos(a2), r2 * std::sin(a2));
          f.weights[k] = w2;
        }
      }
    }
  }
  return f;
}

FactorRule ball_qmc_factor(double s, int m, int level) {
  const std::size_t attempts = 8192ull << (2 * level);
  if (2 * m > static_cast<int>(sizeof(kPrimes) / sizeof(kPrimes[0])))
    throw DimensionError("ball_rule: dimension too large for the Halton bases");
  std::vector<cplx> kept_nodes;
  kept_nodes.reserve(attempts / 2);
  CVec w(m);
  for (std::size_t idx = 1; idx <= attempts; ++idx) {
    double norm2 = 0.0;
    for (int j = 0; j < m; ++j) {
      const double re = s * (2.0 * halton(idx, kPrimes[2 * j]) - 1.0);
      const double im = s * (2.0 * halton(idx, kPrimes[2 * j + 1]) - 1.0);
      w[j] = cplx(re, im);
      norm2 += re * re + im * im;
    }
    if (norm2 < s * s)
      for (int j = 0; j < m; ++j) kept_nodes.push_back(w[j]);
  }
  const std::size_t count = kept_nodes.size() / m;
  if (count == 0) throw QuadratureError("ball_rule: no points accepted");
  FactorRule f;
  f.kind = RuleKind::qmc;
  f.nodes.resize(m, static_cast<Eigen::Index>(count));
  for (std::size_t k = 0; k < count; ++k)
    for (int j = 0; j < m; ++j) f.nodes(j, k) = kept_nodes[k * m + j];
  // Equal weights summing to the exact ball volume; this removes the
  // O(1/attempts) volume error of the plain box estimate.
  double vol = 1.0;
  for (int j = 1; j <= m; ++j) vol *= kPi * s * s / static_cast<double>(j);
  f.weights = RVec::Constant(static_cast<Eigen::Index>(count),
                             vol / static_cast<double>(count));
  return f;
}

std::string node_string(const CVec& w) {
  std::string out = "(";
  char buf[64];
  for (Eigen::Index j = 0; j < w.size(); ++j) {
    std::snprintf(buf, sizeof(buf), "%s%g%+gi", j ? ", " : "", w[j].real(),
                  w[j].imag());
    out += buf;
  }
  return out + ")";
}

struct IntPartial {
  cplx sum{0.0, 0.0};
  std::size_t bad = std::numeric_limits<std::size_t>::max();
  std::string msg;
};

void int_reduce(IntPartial& acc, IntPartial&& p) {
  acc.sum += p.sum;
  if (acc.bad == std::numeric_limits<std::size_t>::max() &&
      p.bad != std::numeric_limits<std::size_t>::max()) {
    acc.bad = p.bad;
    acc.msg = std::move(p.msg);
  }
}

cplx integrate_impl(const Cylinder& c, const Integrand& f,
                    const QuadratureRule& rule, bool parallel) {
  const int dim = rule.dim();
  if (c.n() != dim) throw DimensionError("integrate: rule does not match cylinder");
  const std::size_t count = rule.size();
  auto block = [&](std::size_t, std::size_t lo, std::size_t hi) {
    IntPartial p;
    CVec w(dim), z(dim);
    for (std::size_t k = lo; k < hi; ++k) {
      rule.node(k, w);
      z.noalias() = c.frame.a * w;
      z += c.center;
      cplx v;
      try {
        v = f(z);
      } catch (const std::exception& e) {
        p.bad = k;
        p.msg = e.what();
        return p;
      }
      if (!std::isfinite(v.real()) || !std::isfinite(v.imag())) {
        p.bad = k;
        p.msg = "integrand non-finite at node " + std::to_string(k) + " w = " +
                node_string(w);
        return p;
      }
      p.sum += rule.weight(k) * v;
    }
    return p;
  };
  IntPartial total =
      parallel ? par::block_reduce(count, par::kBlockSize, IntPartial{}, block,
                                   int_reduce)
               : par::block_reduce_serial(count, par::kBlockSize, IntPartial{},
                                          block, int_reduce);
  if (total.bad != std::numeric_limits<std::size_t>::max())
    throw QuadratureError(total.msg);
  return total.sum;
}

}  // namespace

int QuadratureRule::dim() const {
  int d = 0;
  for (const auto& f : factors) d += f.dims();
  return d;
}

std::size_t QuadratureRule::size() const {
  std::size_t m = factors.empty() ? 0 : 1;
  for (const auto& f : factors) m *= f.count();
  return m;
}

void QuadratureRule::node(std::size_t k, CVec& w) const {
  Eigen::Index row = static_cast<Eigen::Index>(dim());
  if (w.size() != row) w.resize(row);
  // Row-major decomposition: the last factor varies fastest.
  for (auto it = factors.rbegin(); it != factors.rend(); ++it) {
    const std::size_t m = it->count();
    const std::size_t kj = k % m;
    k /= m;
    row -= it->dims();
    for (int j = 0; j < it->dims(); ++j)
      w[row + j] = it->nodes(j, static_cast<Eigen::Index>(kj));
  }
}

double QuadratureRule::weight(std::size_t k) const {
  double w = 1.0;
  for (auto it = factors.rbegin(); it != factors.rend(); ++it) {
    const std::size_t m = it->count();
    w *= it->weights[static_cast<Eigen::Index>(k % m)];
    k /= m;
  }
  return w;
}

double QuadratureRule::weight_sum() const {
  double s = factors.empty() ? 0.0 : 1.0;
  for (const auto& f : factors) s *= f.weights.sum();
  return s;
}

QuadratureRule disc_rule(double r, int n_rad, int n_ang) {
  QuadratureRule rule;
  rule.factors.push_back(disc_factor(r, n_rad, n_ang));
  rule.kind = RuleKind::tensor;
  return rule;
}

QuadratureRule ball_rule(double s, int m, int level) {
  if (!(s > 0.0)) throw Error("ball_rule: radius must be positive");
  if (m < 1) throw DimensionError("ball_rule: m must be positive");
  if (level < 0) throw Error("ball_rule: level must be nonnegative");
  QuadratureRule rule;
  rule.level = level;
  const int scale = 1 << level;
  if (m == 1) {
    rule.factors.push_back(disc_factor(s, 3 * scale, 6 * scale));
    rule.kind = RuleKind::tensor;
  } else if (m == 2) {
    rule.factors.push_back(ball2_factor(s, 4 * scale, 3 * scale, 6 * scale));
    rule.kind = RuleKind::tensor;
  } else {
    rule.factors.push_back(ball_qmc_factor(s, m, level));
    rule.kind = RuleKind::qmc;
  }
  return rule;
}

QuadratureRule cylinder_rule(int n, double r, double s, int level) {
  if (n < 1) throw DimensionError("cylinder_rule: n must be positive");
  if (level < 0) throw Error("cylinder_rule: level must be nonnegative");
  const int scale = 1 << level;
  // Estimate the node count before materializing anything; the m = 2 ball
  // factor alone grows like 16^level.
  {
    const double disc = 18.0 * scale * scale;
    double ball = 1.0;
    if (n == 2) ball = disc;
    if (n == 3) ball = 432.0 * std::pow(static_cast<double>(scale), 4.0);
    if (n > 3) ball = 8192.0 * scale * scale;
    if (disc * ball > static_cast<double>(1ull << 36))
      throw Error("cylinder_rule: node count out of range at this level");
  }
  QuadratureRule rule = disc_rule(r, 3 * scale, 6 * scale);
  rule.level = level;
  if (n > 1) {
    QuadratureRule ball = ball_rule(s, n - 1, level);
    rule.factors.push_back(std::move(ball.factors.front()));
    rule.kind = ball.kind;
  }
  if (rule.size() > (1ull << 36))
    throw Error("cylinder_rule: node count out of range at this level");
  return rule;
}

int level_for_degree(int n, int N) {
  int level = 0;
  auto ok = [&](int l) {
    const int scale = 1 << l;
    if (3 * scale < N + 1) return false;      // disc radial exactness
    if (n >= 2 && 4 * scale < N + 2) return false;  // ball radial exactness
    return true;
  };
  while (!ok(level)) ++level;
  return level;
}

cplx integrate_raw(const QuadratureRule& rule, const Integrand& f) {
  CVec w(rule.dim());
  cplx sum(0.0, 0.0);
  const std::size_t count = rule.size();
  for (std::size_t k = 0; k < count; ++k) {
    rule.node(k, w);
    const cplx v = f(w);
    if (!std::isfinite(v.real()) || !std::isfinite(v.imag()))
      throw QuadratureError("integrand non-finite at node " + std::to_string(k) +
                            " w = " + node_string(w));
    sum += rule.weight(k) * v;
  }
  return sum;
}

cplx integrate(const Cylinder& c, const Integrand& f, const QuadratureRule& rule) {
  return integrate_impl(c, f, rule, true);
}

cplx integrate_serial(const Cylinder& c, const Integrand& f,
                      const QuadratureRule& rule) {
  return integrate_impl(c, f, rule, false);
}

IntegrateResult integrate_with_error(const Cylinder& c, const Integrand& f,
                                     int level) {
  const int n = c.n();
  const QuadratureRule fine = cylinder_rule(n, c.r, c.s, level + 1);
  IntegrateResult out;
  out.level = level + 1;
  if (fine.kind == RuleKind::qmc) {
    // Statistical estimate: split the node range into 16 chunks and use
    // the spread of chunk sums as a 99% bound.
    const std::size_t count = fine.size();
    const std::size_t chunk = (count + 15) / 16;
    cplx sums[16];
    int used = 0;
    for (int i = 0; i < 16; ++i) {
      const std::size_t lo = i * chunk;
      const std::size_t hi = std::min(count, lo + chunk);
      if (lo >= hi) break;
      cplx s(0.0, 0.0);
      CVec w(n), z(n);
      for (std::size_t k = lo; k < hi; ++k) {
        fine.node(k, w);
        z.noalias() = c.frame.a * w;
        z += c.center;
        s += fine.weight(k) * f(z);
      }
      sums[used++] = s;
    }
    cplx total(0.0, 0.0);
    for (int i = 0; i < used; ++i) total += sums[i];
    const cplx mean = total / static_cast<double>(used);
    double var = 0.0;
    for (int i = 0; i < used; ++i) var += std::norm(sums[i] - mean);
    var /= std::max(1, used - 1);
    out.value = total;
    out.err = 2.576 * std::sqrt(var * used);
    return out;
  }
  const QuadratureRule coarse = cylinder_rule(n, c.r, c.s, level);
  const cplx vc = integrate(c, f, coarse);
  const cplx vf = integrate(c, f, fine);
  out.value = vf;
  out.err = std::abs(vf - vc);
  return out;
}

}  // namespace l2x
