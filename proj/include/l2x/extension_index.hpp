#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "l2x/common.hpp"
#include "l2x/geometry.hpp"
#include "l2x/gram.hpp"
#include "l2x/weights.hpp"

namespace l2x {

// Convergence controls. Negative fields mean "use the dimension default":
// starting degrees 12 / 8 / 5 and caps 16 / 10 / 6 for n = 1, 2, 3, with
// quadrature level caps 8 / 4 / 2. Iteration stops when the norm gap
// between the last two degrees is below rel_trunc and the change under
// node doubling is below rel_quad, both relative to the current value.
struct Tolerances {
  double rel_trunc = 1e-4;
  double rel_quad = 1e-5;
  int degree = -1;       // pin the degree (no escalation)
  int quad_level = -1;   // pin the top quadrature level
};

int default_degree(int n);
int max_degree(int n);
int max_quad_level(int n);

// Normalized minimal extension energy of the cylinder: the minimum of
// integral |f|^2 e^{-phi} over holomorphic f with f(a) = 1, divided by
// |P| e^{-phi(a)}. A weight value of +inf at the center gives L = +inf;
// -inf gives L = 0.
struct IndexResult {
  Cylinder cylinder;
  double L = 0.0;
  double bound = 0.0;      // |P| e^{-phi(a)}
  double norm_sq = 0.0;    // minimal weighted norm at the reported degree
  double trunc_err = 0.0;  // norm gap between the last two degrees
  double quad_err = 0.0;   // norm change under node doubling
  int degree = 0;
  int level = 0;
  bool converged = false;
  bool degenerate = false;  // center value was +-inf
  ExtremalFunction extremal;
  std::string error;        // set on flagged sweep entries
  std::uint64_t sample_id = 0;
};

IndexResult l2_index(const Cylinder& c, const Weight& w,
                     const Tolerances& tol = {});

// Samples `count` cylinders in d (per-sample substreams of `seed`, so
// entry k is reproducible in isolation) and evaluates each. Failures are
// returned as entries with `error` set rather than aborting the sweep.
// The map over samples runs in parallel; results are ordered by sample id.
std::vector<IndexResult> index_sweep(const Domain& d, const Weight& w,
                                     int count, std::uint64_t seed,
                                     const Tolerances& tol = {},
                                     const SizePolicy& policy = {});

}  // namespace l2x
