#include "l2x/weights.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <Eigen/Dense>

namespace l2x {

double Weight::operator()(const CVec& z) const {
  if (static_cast<int>(z.size()) != n)
    throw DimensionError("Weight: dimension mismatch (" + name + ")");
  return eval(z);
}

namespace {

Weight make(std::string name, int n, Smoothness sm, TruthClass truth,
            std::function<double(const CVec&)> f) {
  Weight w;
  w.source = "catalog:" + name;
  w.name = std::move(name);
  w.n = n;
  w.smoothness = sm;
  w.truth = truth;
  w.eval = std::move(f);
  return w;
}

}  // namespace

std::vector<Weight> catalog(int n) {
  if (n < 1) throw DimensionError("catalog: n must be positive");
  std::vector<Weight> entries;
  entries.push_back(make("zero", n, Smoothness::smooth, TruthClass::pluriharmonic,
                         [](const CVec&) { return 0.0; }));
  entries.push_back(make("const", n, Smoothness::smooth, TruthClass::pluriharmonic,
                         [](const CVec&) { return 0.5; }));
  entries.push_back(make("plh_linear", n, Smoothness::smooth, TruthClass::pluriharmonic,
                         [](const CVec& z) { return 2.0 * z[0].real(); }));
  entries.push_back(make("plh_quad", n, Smoothness::smooth, TruthClass::pluriharmonic,
                         [](const CVec& z) { return 2.0 * (z[0] * z[0]).real(); }));
  entries.push_back(make("gauss", n, Smoothness::smooth, TruthClass::psh_strict,
                         [](const CVec& z) { return z.squaredNorm(); }));
  entries.push_back(make("neg_gauss", n, Smoothness::smooth,
                         TruthClass::superharmonic_strict,
                         [](const CVec& z) { return -z.squaredNorm(); }));
  entries.push_back(make("gauss_tilt", n, Smoothness::smooth, TruthClass::psh_strict,
                         [](const CVec& z) {
                           return 0.5 * z.squaredNorm() + 2.0 * z[0].real();
                         }));
  entries.push_back(make("psh_max", n, Smoothness::continuous_only, TruthClass::psh,
                         [](const CVec& z) {
                           const double t = z[0].real();
                           return std::max(2.0 * t, 4.0 * t);
                         }));
  if (n >= 2) {
    entries.push_back(make("saddle", n, Smoothness::smooth, TruthClass::mixed,
                           [](const CVec& z) {
                             return std::norm(z[0]) - std::norm(z[1]);
                           }));
  }
  return entries;
}

Weight catalog_weight(const std::string& name, int n) {
  for (auto& w : catalog(n))
    if (w.name == name) return w;
  throw Error("unknown catalog weight '" + name + "'");
}

Weight weight_from_expr(const WeightExpr& expr, int validation_samples,
                        double validation_radius) {
  Rng rng(0xC0FFEEULL);
  CVec z(expr.n());
  for (int k = 0; k < validation_samples; ++k) {
    for (int j = 0; j < expr.n(); ++j)
      z[j] = cplx(rng.uniform(-validation_radius, validation_radius),
                  rng.uniform(-validation_radius, validation_radius));
    const cplx v = expr.eval(z);
    if (std::isfinite(v.real()) && std::abs(v.imag()) > 1e-12)
      throw Error("expression is not real valued: imaginary part " +
                  std::to_string(v.imag()) + " at a validation sample");
  }
  Weight w;
  w.name = expr.source();
  w.source = expr.source();
  w.n = expr.n();
  w.smoothness =
      expr.smooth_hint() ? Smoothness::smooth : Smoothness::continuous_only;
  w.truth = TruthClass::unknown;
  w.eval = [e = expr](const CVec& zz) { return e.eval(zz).real(); };
  return w;
}

Weight resolve_weight(const std::string& source, int n) {
  constexpr const char* prefix = "catalog:";
  if (source.rfind(prefix, 0) == 0)
    return catalog_weight(source.substr(8), n);
  return weight_from_expr(parse_weight_expr(source, n));
}

namespace {

// Laplacian of w restricted to the complex line z + t v, at t = 0,
// divided by 4. For v a unit vector this equals v^H (Levi w) v.
double line_quarter_laplacian(const Weight& w, const CVec& z, const CVec& v,
                              double h) {
  const cplx ih(0.0, h);
  const double sum = w(z + h * v) + w(z - h * v) +
                     w(z + ih * v) + w(z - ih * v) - 4.0 * w(z);
  return sum / (4.0 * h * h);
}

}  // namespace

CMat levi_form(const Weight& w, const CVec& z, double h) {
  const int n = static_cast<int>(z.size());
  if (!(h > 0.0)) throw Error("levi_form: step must be positive");
  CMat H(n, n);
  CVec ej = CVec::Zero(n), ek = CVec::Zero(n);
  for (int j = 0; j < n; ++j) {
    ej.setZero();
    ej[j] = 1.0;
    H(j, j) = line_quarter_laplacian(w, z, ej, h);
    for (int k = j + 1; k < n; ++k) {
      ek.setZero();
      ek[k] = 1.0;
      // Polarization: recover the off-diagonal entry from line Laplacians
      // along e_j +- e_k and e_j +- i e_k.
      const double re =
          (line_quarter_laplacian(w, z, ej + ek, h) -
           line_quarter_laplacian(w, z, ej - ek, h)) / 4.0;
      const double im =
          (line_quarter_laplacian(w, z, ej + cplx(0, 1) * ek, h) -
           line_quarter_laplacian(w, z, ej - cplx(0, 1) * ek, h)) / 4.0;
      H(j, k) = cplx(re, im);
      H(k, j) = cplx(re, -im);
    }
  }
  if (!H.allFinite()) throw Error("levi_form: non-finite sample near z");
  return H;
}

LeviSummary levi_classify(const Weight& w, const Domain& d, int points,
                          std::uint64_t seed, double h, double tol) {
  if (w.n != d.n) throw DimensionError("levi_classify: dimension mismatch");
  Rng rng(substream(seed, 0x1e71ULL));
  LeviSummary out;
  out.min_eig = std::numeric_limits<double>::infinity();
  out.max_eig = -std::numeric_limits<double>::infinity();
  Eigen::SelfAdjointEigenSolver<CMat> es;
  for (int k = 0; k < points; ++k) {
    const CVec z = d.sample_interior(rng, 0.8);
    const CMat H = levi_form(w, z, h);
    const CMat H2 = levi_form(w, z, 0.5 * h);
    out.fd_consistency =
        std::max(out.fd_consistency, (H - H2).cwiseAbs().maxCoeff());
    es.compute(H2, Eigen::EigenvaluesOnly);
    out.min_eig = std::min(out.min_eig, es.eigenvalues().minCoeff());
    out.max_eig = std::max(out.max_eig, es.eigenvalues().maxCoeff());
    ++out.points;
  }
  const bool has_pos = out.max_eig > tol;
  const bool has_neg = out.min_eig < -tol;
  if (has_pos && has_neg) out.cls = LeviClass::mixed;
  else if (has_pos) out.cls = LeviClass::psh;
  else if (has_neg) out.cls = LeviClass::superharmonic;
  else out.cls = LeviClass::pluriharmonic;
  return out;
}

}  // namespace l2x
