#include "l2x/extension_index.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "l2x/parallel.hpp"

namespace l2x {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

}  // namespace

int default_degree(int n) {
  switch (n) {
    case 1: return 12;
    case 2: return 8;
    default: return 5;
  }
}

int max_degree(int n) {
  switch (n) {
    case 1: return 16;
    case 2: return 10;
    default: return 6;
  }
}

int max_quad_level(int n) {
  switch (n) {
    case 1: return 8;
    case 2: return 4;
    default: return 2;
  }
}

IndexResult l2_index(const Cylinder& c, const Weight& w, const Tolerances& tol) {
  const int n = c.n();
  if (w.n != n) throw DimensionError("l2_index: weight dimension mismatch");
  if (n > 3) throw DimensionError("l2_index: supported for n <= 3");

  IndexResult res;
  res.cylinder = c;
  const double vol = volume(c);
  const double phi_a = w(c.center);

  if (std::isnan(phi_a)) throw Error("l2_index: weight is NaN at the center");
  if (std::isinf(phi_a)) {
    // Conventions for degenerate centers: phi(a) = +inf forces L = +inf,
    // phi(a) = -inf forces L = 0. No integration happens.
    res.degenerate = true;
    res.converged = true;
    if (phi_a > 0) {
      res.L = kInf;
      res.bound = 0.0;
      res.norm_sq = kInf;
    } else {
      res.L = 0.0;
      res.bound = kInf;
      res.norm_sq = 0.0;
    }
    return res;
  }

  res.bound = vol * std::exp(-phi_a);
  if (!std::isfinite(res.bound))
    throw Error("l2_index: reference bound overflows");

  const bool pin_degree = tol.degree >= 0;
  const bool pin_level = tol.quad_level >= 0;
  int N = pin_degree ? tol.degree : default_degree(n);
  const int N_cap = pin_degree ? tol.degree : max_degree(n);
  const int level_cap = pin_level ? tol.quad_level
                                  : std::max(max_quad_level(n), level_for_degree(n, N_cap));

  int level = std::max(level_for_degree(n, N), n <= 2 ? 2 : 1);
  if (pin_level) level = std::max(level_for_degree(n, N), tol.quad_level - 1);
  level = std::min(level, level_cap);

  double prev_norm = kInf;
  bool have_prev = false;
  GramSystem gram;

  for (;; ++level) {
    const QuadratureRule rule = cylinder_rule(n, c.r, c.s, level);
    gram = assemble_gram(c, w, N, rule);
    RVec norms = norm_sq_by_degree(gram);

    // Degree escalation happens once, at the first level where the tail
    // gap is too large relative to the value.
    if (!pin_degree && N < N_cap) {
      const double gap = norms[N - 1] - norms[N];
      if (gap > tol.rel_trunc * norms[N]) {
        N = N_cap;
        have_prev = false;  // previous-level norms were for the old degree
        const int need = level_for_degree(n, N);
        if (need > level) {
          level = need - 1;  // the loop increment lands on `need`
          continue;
        }
        gram = assemble_gram(c, w, N, cylinder_rule(n, c.r, c.s, level));
        norms = norm_sq_by_degree(gram);
      }
    }

    const double value = norms[N];
    res.trunc_err = norms[N - 1] - value;
    res.quad_err = have_prev ? std::abs(value - prev_norm) : kInf;
    res.norm_sq = value;
    res.degree = N;
    res.level = level;
    res.converged = res.trunc_err <= tol.rel_trunc * value &&
                    res.quad_err <= tol.rel_quad * value;

    if (res.converged || level >= level_cap) break;
    prev_norm = value;
    have_prev = true;
  }

  res.extremal = min_extension(gram, N);
  res.L = res.norm_sq / res.bound;
  return res;
}

std::vector<IndexResult> index_sweep(const Domain& d, const Weight& w, int count,
                                     std::uint64_t seed, const Tolerances& tol,
                                     const SizePolicy& policy) {
  if (count < 0) throw Error("index_sweep: count must be nonnegative");
  // Sampling is serial and cheap; the per-cylinder evaluations are the
  // parallel part. Each entry draws from substream(seed, k) so the sweep
  // decomposes into independently reproducible samples.
  std::vector<Cylinder> cylinders(count);
  std::vector<std::string> sample_errors(count);
  for (int k = 0; k < count; ++k) {
    try {
      cylinders[k] = sample_cylinder(d, substream(seed, k), policy);
    } catch (const std::exception& e) {
      sample_errors[k] = e.what();
    }
  }
  std::vector<IndexResult> results(count);
  par::parallel_for(static_cast<std::size_t>(count), [&](std::size_t k) {
    results[k].sample_id = k;
    if (!sample_errors[k].empty()) {
      results[k].error = sample_errors[k];
      return;
    }
    try {
      IndexResult r = l2_index(cylinders[k], w, tol);
      r.sample_id = k;
      results[k] = std::move(r);
    } catch (const std::exception& e) {
      results[k].cylinder = cylinders[k];
      results[k].error = e.what();
    }
  });
  return results;
}

}  // namespace l2x
