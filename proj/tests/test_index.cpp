#include <doctest.h>

#include <cmath>
#include <limits>

#include "l2x/extension_index.hpp"
#include "l2x/oracle.hpp"
#include "helpers.hpp"

using namespace l2x;
using testutil::cpoint;

TEST_SUITE_BEGIN("index");

TEST_CASE("flat weights have index one") {
  const auto w = catalog_weight("zero", 1);
  const auto res = l2_index(make_cylinder(cpoint({cplx(0.4, -0.2)}), 0.7), w);
  CHECK(res.converged);
  CHECK(std::abs(res.L - 1.0) <= 1e-10);
  CHECK(res.bound == doctest::Approx(kPi * 0.49).epsilon(1e-12));
}

TEST_CASE("radial anchors") {
  const auto g = l2_index(make_cylinder(CVec::Zero(1), 1.0),
                          catalog_weight("gauss", 1));
  CHECK(g.converged);
  CHECK(g.L == doctest::Approx(1.0 - std::exp(-1.0)).epsilon(2e-6));

  const auto ng = l2_index(make_cylinder(CVec::Zero(1), 1.0),
                           catalog_weight("neg_gauss", 1));
  CHECK(ng.converged);
  CHECK(ng.L == doctest::Approx(std::exp(1.0) - 1.0).epsilon(2e-6));
}

TEST_CASE("product weights factor across disc and ball") {
  // |z1|^2 - |z2|^2 on D_1 x B_0.2 splits into two radial factors.
  const auto w = catalog_weight("saddle", 2);
  const auto res = l2_index(make_cylinder(CVec::Zero(2), 1.0, 0.2), w);
  const double f1 = 1.0 - std::exp(-1.0);
  const double f2 = (std::exp(0.04) - 1.0) / 0.04;
  CHECK(res.converged);
  CHECK(res.L == doctest::Approx(f1 * f2).epsilon(5e-6));

  const auto swapped = l2_index(
      make_cylinder(CVec::Zero(2), 1.0, 0.2, Unitary::swap2(2)), w);
  const double g1 = std::exp(1.0) - 1.0;
  const double g2 = (1.0 - std::exp(-0.04)) / 0.04;
  CHECK(swapped.L == doctest::Approx(g1 * g2).epsilon(5e-6));
}

TEST_CASE("degenerate center values short-circuit") {
  Weight plus;
  plus.name = "plus_inf";
  plus.source = "test";
  plus.n = 1;
  plus.eval = [](const CVec& z) {
    return z[0] == cplx(0.0, 0.0)
               ? std::numeric_limits<double>::infinity()
               : 0.0;
  };
  const auto rp = l2_index(make_cylinder(CVec::Zero(1), 0.5), plus);
  CHECK(rp.degenerate);
  CHECK(rp.converged);
  CHECK(std::isinf(rp.L));
  CHECK(rp.L > 0);
  CHECK(rp.bound == 0.0);

  Weight minus = plus;
  minus.name = "minus_inf";
  minus.eval = [](const CVec& z) {
    return z[0] == cplx(0.0, 0.0)
               ? -std::numeric_limits<double>::infinity()
               : 0.0;
  };
  const auto rm = l2_index(make_cylinder(CVec::Zero(1), 0.5), minus);
  CHECK(rm.degenerate);
  CHECK(rm.L == 0.0);
  CHECK(std::isinf(rm.bound));
}

TEST_CASE("translation covariance") {
  const auto w0 = catalog_weight("gauss_tilt", 1);
  const cplx b(0.35, -0.6);
  Weight wb;
  wb.name = "shifted";
  wb.source = "test";
  wb.n = 1;
  wb.eval = [&w0, b](const CVec& z) {
    CVec u(1);
    u[0] = z[0] - b;
    return w0(u);
  };
  const auto r0 = l2_index(make_cylinder(cpoint({cplx(0.2, 0.1)}), 0.6), w0);
  const auto rb =
      l2_index(make_cylinder(cpoint({cplx(0.2, 0.1) + b}), 0.6), wb);
  CHECK(std::abs(r0.L - rb.L) <= 1e-9 * std::abs(r0.L));
}

TEST_CASE("pinned controls are honored") {
  Tolerances tol;
  tol.degree = 6;
  tol.quad_level = 3;
  const auto res = l2_index(make_cylinder(CVec::Zero(1), 1.0),
                            catalog_weight("gauss", 1), tol);
  CHECK(res.degree == 6);
  CHECK(res.level == 3);
}

TEST_CASE("dimension cap") {
  CHECK_THROWS_AS(
      l2_index(make_cylinder(CVec::Zero(4), 0.5, 0.5), catalog_weight("zero", 4)),
      Error);
}

TEST_CASE("sweeps are ordered, reproducible and fault-isolated") {
  const auto d = Domain::ball(CVec::Zero(1), 2.0);
  const auto w = catalog_weight("gauss", 1);
  const auto rs = index_sweep(d, w, 6, 42);
  REQUIRE(rs.size() == 6);
  for (std::size_t k = 0; k < rs.size(); ++k) {
    CHECK(rs[k].sample_id == k);
    CHECK(rs[k].error.empty());
    CHECK(rs[k].converged);
    CHECK(rs[k].L < 1.0);
  }
  const auto rs2 = index_sweep(d, w, 6, 42);
  for (std::size_t k = 0; k < rs.size(); ++k) CHECK(rs[k].L == rs2[k].L);

  // A weight that throws on some cylinders flags those entries only.
  Weight moody;
  moody.name = "moody";
  moody.source = "test";
  moody.n = 1;
  moody.eval = [](const CVec& z) {
    if (z[0].real() > 0.2) throw Error("moody weight");
    return 0.0;
  };
  const auto rm = index_sweep(d, moody, 8, 7);
  int flagged = 0, clean = 0;
  for (const auto& r : rm) {
    if (!r.error.empty()) {
      ++flagged;
      CHECK(r.error.find("moody") != std::string::npos);
    } else {
      CHECK(r.converged);
      ++clean;
    }
  }
  CHECK(flagged > 0);
  CHECK(clean > 0);
}

TEST_CASE("the reported minimizer integrates back to norm_sq") {
  const auto c = make_cylinder(cpoint({cplx(0.3, 0.0)}), 0.8);
  const auto w = catalog_weight("gauss_tilt", 1);
  const auto res = l2_index(c, w);
  REQUIRE(res.converged);
  const auto& f = res.extremal;
  const auto rule = cylinder_rule(1, 0.8, 0.0, res.level);
  const cplx back = integrate(
      c,
      [&](const CVec& z) {
        const cplx v = f.eval(c, z);
        return v * std::conj(v) * std::exp(-w(z));
      },
      rule);
  CHECK(back.real() == doctest::Approx(res.norm_sq).epsilon(1e-9));
}

TEST_SUITE_END();
