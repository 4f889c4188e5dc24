#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "l2x/common.hpp"
#include "l2x/geometry.hpp"
#include "l2x/weight_expr.hpp"

namespace l2x {

enum class Smoothness { smooth, continuous_only };

// Known classification of a catalog entry, used as ground truth in tests.
enum class TruthClass {
  pluriharmonic,
  psh,
  psh_strict,
  superharmonic_strict,
  mixed,
  unknown,
};

// A real-valued weight on C^n. Evaluation may return +-infinity; callers
// decide how to treat non-finite values.
struct Weight {
  std::string name;    // catalog name or expression source
  std::string source;  // "catalog:<name>" or the expression text
  int n = 0;
  Smoothness smoothness = Smoothness::smooth;
  TruthClass truth = TruthClass::unknown;
  std::function<double(const CVec&)> eval;

  double operator()(const CVec& z) const;
};

// Built-in weights in dimension n. Entries that need two variables are
// omitted for n = 1.
std::vector<Weight> catalog(int n);

// Looks up one catalog entry by name; throws on unknown names.
Weight catalog_weight(const std::string& name, int n);

// Wraps a parsed expression as a weight. The expression is evaluated at
// `validation_samples` points in a polydisc of radius `validation_radius`;
// an imaginary part above 1e-12 in magnitude is an error.
Weight weight_from_expr(const WeightExpr& expr,
                        int validation_samples = 64,
                        double validation_radius = 1.5);

// Resolves "catalog:<name>" or an expression source to a Weight.
Weight resolve_weight(const std::string& source, int n);

// Complex Hessian of w at z by centered finite differences on complex
// lines, with step h. The result is exactly Hermitian.
CMat levi_form(const Weight& w, const CVec& z, double h = 1e-3);

enum class LeviClass { pluriharmonic, psh, superharmonic, mixed };

struct LeviSummary {
  LeviClass cls;
  double min_eig = 0.0;      // over all sampled points
  double max_eig = 0.0;
  double fd_consistency = 0.0;  // largest entry change when h is halved
  int points = 0;
};

// Classifies w by the sign pattern of Levi-form eigenvalues at `points`
// interior samples of d. Eigenvalues within `tol` of zero count as zero.
LeviSummary levi_classify(const Weight& w, const Domain& d, int points,
                          std::uint64_t seed, double h = 1e-3,
                          double tol = 1e-5);

}  // namespace l2x
