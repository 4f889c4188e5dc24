#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "l2x/common.hpp"
#include "l2x/extension_index.hpp"
#include "l2x/poly.hpp"
#include "l2x/weights.hpp"

namespace l2x {

enum class CylinderClass { below_one, equal_one, above_one, unresolved };

const char* to_string(CylinderClass c);

// Equality tolerance for one result: three times the combined error bars
// relative to the reference bound, floored at tol_floor.
double equality_tol(const IndexResult& r, double tol_floor = 1e-4);

// Places L against 1 using the result's own error bars. Degenerate and
// flagged entries come back unresolved (except the exact 0 / +inf cases,
// which are decisively below / above).
CylinderClass classify_cylinder(const IndexResult& r, double tol_floor = 1e-4);

// Whether the minimizer is the unique function attaining the reference
// bound, i.e. the minimal norm matches |P| e^{-phi(a)} within the
// equality tolerance.
bool uniqueness_check(const IndexResult& r, double tol_floor = 1e-4);

// One lower-bound probe: for a holomorphic polynomial g, compares
//   lhs = integral of |e^g|^2 e^{-phi}   over the cylinder
//   rhs = |P| |e^{g(a)}|^2 e^{-phi(a)}.
// Weights that are superharmonic along every complex line keep
// margin = lhs - rhs >= 0 for all g; a decisive violation rules that out.
struct TwistEntry {
  std::string g;
  std::size_t cylinder_id = 0;
  double lhs = 0.0;
  double rhs = 0.0;
  double margin = 0.0;
  double quad_err = 0.0;
  bool holds = false;          // margin >= 0 within error bars
  bool decisive = false;       // the sign of margin is outside error bars
};

struct TwistReport {
  std::vector<TwistEntry> entries;
  int violations = 0;        // decisive negative margins
  int decisive_holds = 0;
  bool all_hold = true;      // no decisive violation
};

// The built-in twist family: low-degree exponents in the first
// coordinates, including g = 0.
std::vector<Poly> default_twists(int n);

TwistReport twist_test(const Weight& w, const std::vector<Poly>& gs,
                       const std::vector<Cylinder>& cylinders, int level);

enum class VerdictLabel {
  pluriharmonic_consistent,
  psh_consistent_strict,
  superharmonic_consistent_strict,
  mixed,
  inconclusive,
};

const char* to_string(VerdictLabel v);

struct Verdict {
  VerdictLabel label = VerdictLabel::inconclusive;
  VerdictLabel before_twists = VerdictLabel::inconclusive;
  int below = 0;
  int equal = 0;
  int above = 0;
  int unresolved = 0;
  double L_min = 0.0;
  double L_max = 0.0;
  TwistReport twists;
};

// Aggregates per-cylinder classes into a sweep-level verdict. Labels that
// assert L >= 1 everywhere are demoted to inconclusive by any decisive
// twist violation, which certifies L < 1 somewhere.
Verdict verdict(const std::vector<IndexResult>& results,
                const TwistReport& twists, double tol_floor = 1e-4);

// Full pipeline: sweep, twist probes on a deterministic subset of the
// sampled cylinders plus a centered probe, verdict.
struct ClassifyOutcome {
  std::vector<IndexResult> results;
  Verdict verdict;
};

ClassifyOutcome classify_weight(const Domain& d, const Weight& w, int count,
                                std::uint64_t seed, const Tolerances& tol = {},
                                const SizePolicy& policy = {},
                                const std::vector<Poly>& extra_twists = {});

}  // namespace l2x
