#include "l2x/selftest.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdarg>
#include <cstdio>

#include "l2x/classify.hpp"
#include "l2x/extension_index.hpp"
#include "l2x/geometry.hpp"
#include "l2x/gram.hpp"
#include "l2x/oracle.hpp"
#include "l2x/parallel.hpp"
#include "l2x/quadrature.hpp"
#include "l2x/serialize.hpp"
#include "l2x/weights.hpp"

namespace l2x {

namespace {

struct Ctx {
  bool quick;
  std::vector<CheckResult> results;
  const std::function<void(const CheckResult&)>* on_result;

  void run(const std::string& name, const std::function<std::string()>& body) {
    CheckResult r;
    r.name = name;
    const auto t0 = std::chrono::steady_clock::now();
    try {
      r.detail = body();
      r.pass = true;
    } catch (const std::exception& e) {
      r.pass = false;
      r.detail = e.what();
    }
    r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (*on_result) (*on_result)(r);
    results.push_back(std::move(r));
  }
};

[[noreturn]] void failf(const char* fmt, ...) {
  char buf[512];
  va_list args;
  va_start(args, fmt);
  std::vsnprintf(buf, sizeof(buf), fmt, args);
  va_end(args);
  throw Error(buf);
}

void expect(bool cond, const char* what, double got, double want, double tol) {
  if (!cond) failf("%s: got %.12g, want %.12g (tol %.3g)", what, got, want, tol);
}

void expect_close(const char* what, double got, double want, double tol) {
  expect(std::abs(got - want) <= tol, what, got, want, tol);
}

std::string okf(const char* fmt, ...) {
  char buf[256];
  va_list args;
  va_start(args, fmt);
  std::vsnprintf(buf, sizeof(buf), fmt, args);
  va_end(args);
  return buf;
}

CVec cv1(cplx a) {
  CVec v(1);
  v[0] = a;
  return v;
}

CVec cv2(cplx a, cplx b) {
  CVec v(2);
  v[0] = a;
  v[1] = b;
  return v;
}

}  // namespace

std::vector<CheckResult> run_selftest(
    bool quick, const std::function<void(const CheckResult&)>& on_result) {
  Ctx ctx{quick, {}, &on_result};

  ctx.run("volume_closed_form", [&] {
    const double v1 = volume(make_cylinder(cv1(0.0), 2.0));
    expect_close("disc area r=2", v1, 4.0 * kPi, 1e-12 * v1);
    const double v2 = volume(make_cylinder(cv2(0.0, 0.0), 1.0, 0.5));
    expect_close("n=2 volume", v2, kPi * kPi * 0.25, 1e-12 * v2);
    CVec c3 = CVec::Zero(3);
    const double v3 = volume(make_cylinder(c3, 1.0, 2.0));
    expect_close("n=3 volume", v3, 8.0 * kPi * kPi * kPi, 1e-12 * v3);
    return okf("three closed forms match");
  });

  ctx.run("volume_mc_cross_check", [&] {
    const auto c = make_cylinder(cv2(0.1, -0.2), 0.8, 0.6);
    const std::size_t m = ctx.quick ? 400000 : 2000000;
    const auto mc = oracle::mc_integral(
        c, [](const CVec&) { return cplx(1.0, 0.0); }, m, 97);
    const double vol = volume(c);
    const double err = std::abs(mc.value.real() - vol);
    const double allow = std::max(4.0 * mc.ci99, 2e-3 * vol);
    expect(err <= allow, "volume vs Monte Carlo", mc.value.real(), vol, allow);
    return okf("|diff| = %.3g within %.3g", err, allow);
  });

  ctx.run("quadrature_weight_sum", [&] {
    const auto c1 = make_cylinder(cv1(0.0), 0.7);
    const double s1 = cylinder_rule(1, c1.r, c1.s, 3).weight_sum();
    expect_close("n=1 weight sum", s1, volume(c1), 1e-10 * volume(c1));
    const auto c2 = make_cylinder(cv2(0.0, 0.0), 0.9, 0.4);
    const double s2 = cylinder_rule(2, c2.r, c2.s, 2).weight_sum();
    expect_close("n=2 weight sum", s2, volume(c2), 1e-10 * volume(c2));
    return okf("sums match volumes to 1e-10");
  });

  ctx.run("quadrature_exactness", [&] {
    const double r = 1.3;
    const auto rule = disc_rule(r, 8, 20);
    // integral over the disc of |w|^(2j) is pi r^(2j+2) / (j+1)
    for (int j = 0; j <= 6; ++j) {
      const cplx got = integrate_raw(rule, [j](const CVec& z) {
        return std::pow(std::norm(z[0]), j);
      });
      const double want = kPi * std::pow(r, 2 * j + 2) / (j + 1);
      expect_close("disc |w|^2j", got.real(), want, 1e-12 * want);
    }
    const cplx skew = integrate_raw(rule, [](const CVec& z) {
      return z[0] * z[0] * std::conj(z[0]);
    });
    expect_close("disc skew term", std::abs(skew), 0.0, 1e-12);
    // ball in C^2: integral of |w1|^(2a) |w2|^(2c) equals
    // pi^2 s^(2a+2c+4) a! c! / (a+c+2)!
    const double s = 0.8;
    const auto ball = ball_rule(s, 2, 1);
    const auto fact = [](int k) {
      double f = 1;
      for (int i = 2; i <= k; ++i) f *= i;
      return f;
    };
    for (int a = 0; a <= 2; ++a)
      for (int cdeg = 0; cdeg <= 2; ++cdeg) {
        const cplx got = integrate_raw(ball, [a, cdeg](const CVec& z) {
          return std::pow(std::norm(z[0]), a) * std::pow(std::norm(z[1]), cdeg);
        });
        const double want = kPi * kPi * std::pow(s, 2 * (a + cdeg) + 4) *
                            fact(a) * fact(cdeg) / fact(a + cdeg + 2);
        expect_close("ball monomial", got.real(), want, 1e-11 * want);
      }
    return okf("disc and ball rules integrate monomials exactly");
  });

  ctx.run("quadrature_frame_invariance", [&] {
    Rng rng(11);
    const CVec a = cv2(0.3, cplx(0.0, -0.1));
    auto f = [&](const CVec& z) {
      return cplx(std::exp(-(z - a).squaredNorm()), 0.0);
    };
    const auto c1 = make_cylinder(a, 0.7, 0.5, haar_unitary(2, rng));
    const auto c2 = make_cylinder(a, 0.7, 0.5, haar_unitary(2, rng));
    const auto r1 = integrate_with_error(c1, f, 2);
    const auto r2 = integrate_with_error(c2, f, 2);
    const double allow = 10.0 * std::max({r1.err, r2.err, 1e-14});
    expect(std::abs(r1.value - r2.value) <= allow, "frame invariance",
           r1.value.real(), r2.value.real(), allow);
    return okf("two Haar frames agree within %.3g", allow);
  });

  ctx.run("haar_first_entry_moment", [&] {
    Rng rng(2024);
    const int m = ctx.quick ? 2000 : 10000;
    double acc = 0.0;
    for (int k = 0; k < m; ++k) acc += std::norm(haar_unitary(2, rng).a(0, 0));
    acc /= m;
    expect_close("mean |a11|^2 on U(2)", acc, 0.5, 0.02);
    return okf("mean %.4f over %d draws", acc, m);
  });

  ctx.run("parser_roundtrip", [&] {
    Rng rng(7);
    const int cases = ctx.quick ? 50 : 200;
    std::function<ExprPtr(int, int)> gen = [&](int n, int depth) -> ExprPtr {
      auto e = std::make_shared<Expr>();
      const double u = rng.uniform();
      if (depth <= 0 || u < 0.25) {
        if (rng.uniform() < 0.5) {
          e->kind = ExprKind::constant;
          // parser-canonical constants: nonnegative, pure real or imaginary
          const double v = std::floor(rng.uniform(0.0, 8.0)) * 0.5;
          e->value = rng.uniform() < 0.3 ? cplx(0.0, v) : cplx(v, 0.0);
        } else {
          e->kind = ExprKind::variable;
          e->var = static_cast<int>(rng.uniform(0.0, n));
          if (e->var >= n) e->var = n - 1;
        }
        return e;
      }
      const int pick = static_cast<int>(rng.uniform(0.0, 7.0));
      switch (pick) {
        case 0: e->kind = ExprKind::add; break;
        case 1: e->kind = ExprKind::sub; break;
        case 2: e->kind = ExprKind::mul; break;
        case 3: e->kind = ExprKind::div; break;
        case 4: e->kind = ExprKind::neg; break;
        case 5: e->kind = ExprKind::pow; break;
        default: e->kind = ExprKind::func; break;
      }
      e->lhs = gen(n, depth - 1);
      if (e->kind == ExprKind::add || e->kind == ExprKind::sub ||
          e->kind == ExprKind::mul || e->kind == ExprKind::div)
        e->rhs = gen(n, depth - 1);
      if (e->kind == ExprKind::pow)
        e->exponent = static_cast<int>(rng.uniform(0.0, 5.0)) - 1;
      if (e->kind == ExprKind::func)
        e->func = static_cast<FuncKind>(static_cast<int>(rng.uniform(0.0, 7.0)) % 7);
      return e;
    };
    for (int k = 0; k < cases; ++k) {
      const int n = 1 + static_cast<int>(rng.uniform(0.0, 3.0));
      WeightExpr we("", gen(n, 4), n);
      const std::string printed = we.print();
      WeightExpr back = parse_weight_expr(printed, n);
      if (!expr_equal(we.ast(), back.ast()))
        failf("round trip changed the tree for '%s'", printed.c_str());
    }
    return okf("%d random trees survive print+parse", cases);
  });

  ctx.run("levi_pluriharmonic", [&] {
    const Domain d = Domain::ball(cv2(0.0, 0.0), 1.5);
    for (const char* name : {"zero", "const", "plh_linear", "plh_quad"}) {
      const Weight w = catalog_weight(name, 2);
      const auto summary = levi_classify(w, d, ctx.quick ? 20 : 50, 5);
      const double rad = std::max(std::abs(summary.min_eig), std::abs(summary.max_eig));
      if (rad >= 1e-5) failf("%s: spectral radius %.3g >= 1e-5", name, rad);
      if (summary.cls != LeviClass::pluriharmonic)
        failf("%s: classified away from pluriharmonic", name);
    }
    return okf("four entries have flat complex Hessians");
  });

  ctx.run("norms_monotone_in_degree", [&] {
    const auto c = make_cylinder(cv1(cplx(0.2, 0.1)), 0.9);
    const Weight w = catalog_weight("gauss", 1);
    auto g = assemble_gram(c, w, 12, cylinder_rule(1, c.r, c.s, 3));
    const RVec norms = norm_sq_by_degree(g);
    for (int d = 1; d <= 12; ++d)
      if (norms[d] > norms[d - 1])
        failf("norm rose from degree %d to %d: %.17g -> %.17g", d - 1, d,
              norms[d - 1], norms[d]);
    return okf("13 truncation degrees are nonincreasing");
  });

  ctx.run("gram_parallel_matches_serial", [&] {
    const auto c = make_cylinder(cv2(cplx(0.1, 0.2), -0.3), 0.6, 0.4);
    const Weight w = catalog_weight("gauss_tilt", 2);
    const auto rule = cylinder_rule(2, c.r, c.s, 2);
    auto gp = assemble_gram(c, w, 6, rule);
    auto gs = assemble_gram_serial(c, w, 6, rule);
    const double diff = (gp.G - gs.G).cwiseAbs().maxCoeff();
    if (diff != 0.0) failf("parallel and serial Gram differ by %.3g", diff);
    return okf("bitwise identical Gram matrices");
  });

  ctx.run("flat_weight_identity", [&] {
    const Weight w1 = catalog_weight("zero", 1);
    for (double r : {0.3, 0.9}) {
      const auto res = l2_index(make_cylinder(cv1(cplx(0.2, -0.4)), r), w1);
      expect_close("flat weight L (n=1)", res.L, 1.0, 1e-8);
    }
    if (!ctx.quick) {
      const Weight w2 = catalog_weight("const", 2);
      Rng rng(3);
      const auto c = make_cylinder(cv2(0.1, 0.2), 0.5, 0.35, haar_unitary(2, rng));
      const auto res = l2_index(c, w2);
      expect_close("flat weight L (n=2)", res.L, 1.0, 1e-8);
    }
    return okf("constants give L = 1");
  });

  ctx.run("pluriharmonic_equality", [&] {
    const Weight w1 = catalog_weight("plh_linear", 1);
    const auto r1 = l2_index(make_cylinder(cv1(cplx(0.3, 0.1)), 0.6), w1);
    expect_close("2Re(z1) L", r1.L, 1.0, 5e-4);
    if (!uniqueness_check(r1)) failf("uniqueness flag off at L = %.8f", r1.L);
    if (!ctx.quick) {
      const Weight w2 = catalog_weight("plh_quad", 2);
      Rng rng(8);
      const auto c = make_cylinder(cv2(cplx(0.2, 0.3), cplx(-0.1, 0.1)), 0.45, 0.3,
                                   haar_unitary(2, rng));
      const auto r2 = l2_index(c, w2);
      expect_close("2Re(z1^2) L (n=2)", r2.L, 1.0, 5e-4);
      if (!uniqueness_check(r2)) failf("uniqueness flag off (n=2)");
    }
    return okf("equality and uniqueness hold");
  });

  ctx.run("radial_oracle_agreement", [&] {
    const Weight g = catalog_weight("gauss", 1);
    const auto res = l2_index(make_cylinder(cv1(0.0), 1.0), g);
    const double ref =
        oracle::radial_index([](double t) { return t * t; }, 1.0);
    expect_close("gauss vs radial oracle", res.L, ref, 1e-6);
    const Weight ng = catalog_weight("neg_gauss", 1);
    const auto res2 = l2_index(make_cylinder(cv1(0.0), 0.8), ng);
    const double ref2 =
        oracle::radial_index([](double t) { return -t * t; }, 0.8);
    expect_close("neg_gauss vs radial oracle", res2.L, ref2, 1e-6);
    return okf("both radial weights agree to 1e-6");
  });

  ctx.run("psh_direction", [&] {
    const Domain d = Domain::ball(cv1(0.0), 2.0);
    const int m = ctx.quick ? 4 : 8;
    for (const auto& r : index_sweep(d, catalog_weight("gauss", 1), m, 42)) {
      if (!r.error.empty()) failf("sweep entry failed: %s", r.error.c_str());
      if (r.L > 1.0 + 1e-4) failf("gauss produced L = %.8f > 1", r.L);
      if (classify_cylinder(r) != CylinderClass::below_one)
        failf("gauss cylinder not below_one (L = %.8f)", r.L);
    }
    for (const auto& r : index_sweep(d, catalog_weight("neg_gauss", 1), m, 42)) {
      if (!r.error.empty()) failf("sweep entry failed: %s", r.error.c_str());
      if (classify_cylinder(r) != CylinderClass::above_one)
        failf("neg_gauss cylinder not above_one (L = %.8f)", r.L);
    }
    return okf("%d cylinders on each side of 1", m);
  });

  ctx.run("saddle_frames", [&] {
    if (ctx.quick) return okf("skipped in quick mode");
    const Weight w = catalog_weight("saddle", 2);
    const auto ci = make_cylinder(cv2(0.0, 0.0), 1.0, 0.2);
    const auto cs = make_cylinder(cv2(0.0, 0.0), 1.0, 0.2, Unitary::swap2(2));
    const auto ri = l2_index(ci, w);
    const auto rs = l2_index(cs, w);
    if (!(ri.L < 1.0 - 1e-3)) failf("identity frame L = %.6f not below 1", ri.L);
    if (!(rs.L > 1.0 + 1e-3)) failf("swapped frame L = %.6f not above 1", rs.L);
    return okf("L = %.4f below, %.4f above", ri.L, rs.L);
  });

  ctx.run("twist_probes", [&] {
    const Weight g = catalog_weight("gauss", 1);
    const auto c = make_cylinder(cv1(0.0), 1.0);
    const auto rep = twist_test(g, default_twists(1), {c}, 3);
    const auto& zero_entry = rep.entries.front();
    if (zero_entry.holds || !zero_entry.decisive)
      failf("gauss g=0 probe should fail decisively (margin %.6f)",
            zero_entry.margin);
    const Weight ng = catalog_weight("neg_gauss", 1);
    const auto rep2 = twist_test(ng, default_twists(1), {c}, 3);
    if (!rep2.all_hold) failf("neg_gauss probes should all hold");
    return okf("probe signs match theory");
  });

  ctx.run("deterministic_output", [&] {
    const Domain d = Domain::ball(cv1(0.0), 1.5);
    const Weight w = catalog_weight("gauss_tilt", 1);
    const auto o1 = classify_weight(d, w, 4, 9);
    const auto o2 = classify_weight(d, w, 4, 9);
    const std::string j1 = classify_json(o1, w.source, d.describe(), 4, 9);
    const std::string j2 = classify_json(o2, w.source, d.describe(), 4, 9);
    if (j1 != j2) failf("repeated runs serialized differently");
    const int old_jobs = par::jobs();
    par::set_jobs(1);
    const auto o3 = classify_weight(d, w, 4, 9);
    par::set_jobs(old_jobs);
    const std::string j3 = classify_json(o3, w.source, d.describe(), 4, 9);
    if (j1 != j3) failf("thread count changed the output bytes");
    return okf("byte-identical across runs and job counts");
  });

  ctx.run("extremal_series", [&] {
    if (ctx.quick) return okf("skipped in quick mode");
    // Weight 2 Re(z1) has minimizer exp(z1 - a1); its plain monomial
    // coefficients in w = z - a are 1/k!.
    const Weight w = catalog_weight("plh_linear", 1);
    const auto res = l2_index(make_cylinder(cv1(0.1), 0.5), w);
    double fact = 1.0;
    for (int k = 0; k <= 6; ++k) {
      if (k > 0) fact *= k;
      const cplx got = res.extremal.coeff(k);
      expect_close("series coefficient", std::abs(got - cplx(1.0 / fact, 0.0)),
                   0.0, 1e-6);
    }
    return okf("minimizer matches exp(z - a) through degree 6");
  });

  return std::move(ctx.results);
}

}  // namespace l2x
