#include "l2x/classify.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "l2x/quadrature.hpp"

namespace l2x {

const char* to_string(CylinderClass c) {
  switch (c) {
    case CylinderClass::below_one: return "below_one";
    case CylinderClass::equal_one: return "equal_one";
    case CylinderClass::above_one: return "above_one";
    case CylinderClass::unresolved: return "unresolved";
  }
  return "?";
}

const char* to_string(VerdictLabel v) {
  switch (v) {
    case VerdictLabel::pluriharmonic_consistent: return "pluriharmonic_consistent";
    case VerdictLabel::psh_consistent_strict: return "psh_consistent_strict";
    case VerdictLabel::superharmonic_consistent_strict:
      return "superharmonic_consistent_strict";
    case VerdictLabel::mixed: return "mixed";
    case VerdictLabel::inconclusive: return "inconclusive";
  }
  return "?";
}

double equality_tol(const IndexResult& r, double tol_floor) {
  if (!(r.bound > 0.0) || !std::isfinite(r.bound)) return tol_floor;
  return std::max(3.0 * (r.trunc_err + r.quad_err) / r.bound, tol_floor);
}

CylinderClass classify_cylinder(const IndexResult& r, double tol_floor) {
  if (!r.error.empty()) return CylinderClass::unresolved;
  if (r.degenerate) {
    if (r.L == 0.0) return CylinderClass::below_one;
    if (std::isinf(r.L) && r.L > 0) return CylinderClass::above_one;
    return CylinderClass::unresolved;
  }
  if (!r.converged) return CylinderClass::unresolved;
  const double tol = equality_tol(r, tol_floor);
  if (std::abs(r.L - 1.0) <= tol) return CylinderClass::equal_one;
  return r.L < 1.0 ? CylinderClass::below_one : CylinderClass::above_one;
}

bool uniqueness_check(const IndexResult& r, double tol_floor) {
  return classify_cylinder(r, tol_floor) == CylinderClass::equal_one &&
         !r.degenerate;
}

std::vector<Poly> default_twists(int n) {
  std::vector<Poly> gs;
  gs.push_back(Poly::zero(n));
  auto mono = [n](int var, int deg, cplx c) {
    MultiIndex a(n, 0);
    a[var] = deg;
    return Poly::monomial(n, std::move(a), c);
  };
  gs.push_back(mono(0, 1, cplx(1.0, 0.0)));
  gs.push_back(mono(0, 1, cplx(0.0, 1.0)));
  gs.push_back(mono(0, 1, cplx(0.5, 0.0)));
  gs.push_back(mono(0, 2, cplx(1.0, 0.0)));
  gs.push_back(mono(0, 2, cplx(0.5, 0.0)));
  if (n >= 2) {
    MultiIndex a(n, 0);
    a[0] = a[1] = 1;
    gs.push_back(Poly::monomial(n, a, cplx(1.0, 0.0)));
    gs.push_back(Poly::monomial(n, std::move(a), cplx(0.5, 0.0)));
  }
  return gs;
}

TwistReport twist_test(const Weight& w, const std::vector<Poly>& gs,
                       const std::vector<Cylinder>& cylinders, int level) {
  TwistReport report;
  for (std::size_t ci = 0; ci < cylinders.size(); ++ci) {
    const Cylinder& c = cylinders[ci];
    const double phi_a = w(c.center);
    if (!std::isfinite(phi_a)) continue;  // degenerate centers prove nothing
    const double vol = volume(c);
    for (const auto& g : gs) {
      const cplx ga = g.eval(c.center);
      TwistEntry e;
      e.g = g.source;
      e.cylinder_id = ci;
      e.rhs = vol * std::exp(2.0 * ga.real() - phi_a);
      IntegrateResult lhs = integrate_with_error(
          c,
          [&](const CVec& z) {
            return cplx(std::exp(2.0 * g.eval(z).real() - w(z)), 0.0);
          },
          level);
      e.lhs = lhs.value.real();
      e.quad_err = lhs.err;
      e.margin = e.lhs - e.rhs;
      const double bar = std::max(3.0 * e.quad_err, 1e-9 * std::max(1.0, e.rhs));
      e.holds = e.margin >= -bar;
      e.decisive = std::abs(e.margin) > bar;
      if (!e.holds && e.decisive) {
        ++report.violations;
        report.all_hold = false;
      }
      if (e.holds && e.decisive) ++report.decisive_holds;
      report.entries.push_back(std::move(e));
    }
  }
  return report;
}

Verdict verdict(const std::vector<IndexResult>& results,
                const TwistReport& twists, double tol_floor) {
  Verdict v;
  v.twists = twists;
  v.L_min = std::numeric_limits<double>::infinity();
  v.L_max = -std::numeric_limits<double>::infinity();
  for (const auto& r : results) {
    switch (classify_cylinder(r, tol_floor)) {
      case CylinderClass::below_one: ++v.below; break;
      case CylinderClass::equal_one: ++v.equal; break;
      case CylinderClass::above_one: ++v.above; break;
      case CylinderClass::unresolved: ++v.unresolved; break;
    }
    if (r.error.empty() && !std::isnan(r.L)) {
      v.L_min = std::min(v.L_min, r.L);
      v.L_max = std::max(v.L_max, r.L);
    }
  }

  const int total = v.below + v.equal + v.above + v.unresolved;
  if (total == 0 || v.unresolved > 0) {
    v.label = v.before_twists = VerdictLabel::inconclusive;
    return v;
  }
  if (v.below > 0 && v.above > 0) {
    v.label = VerdictLabel::mixed;
  } else if (v.below == 0 && v.above == 0) {
    v.label = VerdictLabel::pluriharmonic_consistent;
  } else if (v.above == 0) {
    v.label = VerdictLabel::psh_consistent_strict;
  } else {
    v.label = VerdictLabel::superharmonic_consistent_strict;
  }
  v.before_twists = v.label;

  // A decisive violation proves L < 1 on some cylinder, which contradicts
  // any label asserting L >= 1 everywhere. Other twist outcomes are
  // reported as corroborating data but never override the sweep.
  const bool claims_at_least_one =
      v.label == VerdictLabel::pluriharmonic_consistent ||
      v.label == VerdictLabel::superharmonic_consistent_strict;
  if (claims_at_least_one && twists.violations > 0)
    v.label = VerdictLabel::inconclusive;

  return v;
}

ClassifyOutcome classify_weight(const Domain& d, const Weight& w, int count,
                                std::uint64_t seed, const Tolerances& tol,
                                const SizePolicy& policy,
                                const std::vector<Poly>& extra_twists) {
  ClassifyOutcome out;
  out.results = index_sweep(d, w, count, seed, tol, policy);

  // Twist probes: a centered cylinder plus the first few samples. The
  // centered probe pins down weights whose violations cluster at the
  // middle of the domain.
  std::vector<Cylinder> probes;
  {
    const double gap = d.boundary_gap(d.center);
    const double rho = std::min(0.5 * gap, policy.rho_cap);
    if (rho > policy.min_rho) {
      if (d.n == 1)
        probes.push_back(make_cylinder(d.center, rho));
      else
        probes.push_back(
            make_cylinder(d.center, rho / std::sqrt(2.0), rho / std::sqrt(2.0)));
    }
  }
  for (const auto& r : out.results) {
    if (probes.size() >= 5) break;
    if (r.error.empty() && !r.degenerate) probes.push_back(r.cylinder);
  }

  std::vector<Poly> gs = default_twists(d.n);
  gs.insert(gs.end(), extra_twists.begin(), extra_twists.end());
  const int twist_level = d.n <= 2 ? 3 : 1;
  TwistReport report = twist_test(w, gs, probes, twist_level);

  out.verdict = verdict(out.results, report);
  return out;
}

}  // namespace l2x
