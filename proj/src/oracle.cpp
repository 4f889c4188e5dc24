#include "l2x/oracle.hpp"

#include <cmath>

#include "l2x/rng.hpp"

namespace l2x::oracle {

namespace {

double simpson_step(const std::function<double(double)>& f, double a, double b,
                    double fa, double fm, double fb, double whole, double tol,
                    int depth, int max_depth) {
  const double m = 0.5 * (a + b);
  const double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
  const double flm = f(lm), frm = f(rm);
  const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
  const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
  const double delta = left + right - whole;
  if (depth >= max_depth || std::abs(delta) <= 15.0 * tol)
    return left + right + delta / 15.0;
  return simpson_step(f, a, m, fa, flm, fm, left, 0.5 * tol, depth + 1, max_depth) +
         simpson_step(f, m, b, fm, frm, fb, right, 0.5 * tol, depth + 1, max_depth);
}

}  // namespace

double simpson(const std::function<double(double)>& f, double a, double b,
               double tol, int max_depth) {
  const double fa = f(a), fb = f(b), fm = f(0.5 * (a + b));
  const double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
  return simpson_step(f, a, b, fa, fm, fb, whole, tol, 0, max_depth);
}

double radial_index(const std::function<double(double)>& p, double r, double tol) {
  if (!(r > 0.0)) throw Error("radial_index: radius must be positive");
  const double p0 = p(0.0);
  if (!std::isfinite(p0)) throw Error("radial_index: weight not finite at 0");
  const double num =
      2.0 * kPi * simpson([&](double t) { return t * std::exp(-p(t)); }, 0.0, r,
                          tol * r);
  const double den = kPi * r * r * std::exp(-p0);
  return num / den;
}

MCResult mc_integral(const Cylinder& c, const std::function<cplx(const CVec&)>& f,
                     std::size_t samples, std::uint64_t seed) {
  const int n = c.n();
  if (samples == 0) throw Error("mc_integral: need at least one sample");
  OracleRng rng(seed);
  const double s = n > 1 ? c.s : 0.0;
  // Bounding box of the standard cylinder: |Re|, |Im| <= r in the first
  // coordinate and <= s in the others.
  double box = 4.0 * c.r * c.r;
  for (int j = 1; j < n; ++j) box *= 4.0 * s * s;

  CVec w(n), z(n);
  cplx sum(0.0, 0.0);
  double sum_norm2 = 0.0;
  std::size_t accepted = 0;
  for (std::size_t k = 0; k < samples; ++k) {
    w[0] = cplx(rng.uniform(-c.r, c.r), rng.uniform(-c.r, c.r));
    bool inside = std::norm(w[0]) < c.r * c.r;
    double ball = 0.0;
    for (int j = 1; j < n; ++j) {
      w[j] = cplx(rng.uniform(-s, s), rng.uniform(-s, s));
      ball += std::norm(w[j]);
    }
    if (n > 1 && ball >= s * s) inside = false;
    if (!inside) continue;
    ++accepted;
    z.noalias() = c.frame.a * w;
    z += c.center;
    const cplx v = f(z);
    if (!std::isfinite(v.real()) || !std::isfinite(v.imag()))
      throw Error("mc_integral: integrand non-finite at a sample");
    sum += v;
    sum_norm2 += std::norm(v);
  }
  MCResult out;
  out.samples = samples;
  out.efficiency = static_cast<double>(accepted) / static_cast<double>(samples);
  if (out.efficiency < 0.01)
    throw Error("mc_integral: rejection efficiency below 1%");
  // Estimator of Int f = box * E[f * 1_inside]; rejected samples count as
  // zero, so the indicator's variance is included.
  const double inv = 1.0 / static_cast<double>(samples);
  out.value = box * sum * inv;
  const double var_est = std::max(0.0, sum_norm2 * inv - std::norm(sum * inv));
  out.ci99 = 2.576 * box * std::sqrt(var_est * inv);
  return out;
}

std::function<cplx(const CVec&)> pluriharmonic_extremal(const Poly& h,
                                                        const Cylinder& c) {
  const cplx ha = h.eval(c.center);
  return [h, ha](const CVec& z) { return std::exp(h.eval(z) - ha); };
}

}  // namespace l2x::oracle
