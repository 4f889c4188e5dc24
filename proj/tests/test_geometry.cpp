#include <doctest.h>

#include <cmath>
#include <set>

#include <Eigen/LU>

#include "l2x/geometry.hpp"
#include "l2x/oracle.hpp"
#include "helpers.hpp"

using namespace l2x;
using testutil::cpoint;

TEST_SUITE_BEGIN("geometry");

TEST_CASE("domain factories validate their inputs") {
  CHECK_THROWS_AS(Domain::ball(CVec::Zero(1), -1.0), Error);
  CHECK_THROWS_AS(Domain::ball(CVec::Zero(0), 1.0), Error);
  RVec radii(2);
  radii << 1.0, -2.0;
  CHECK_THROWS_AS(Domain::polydisc(CVec::Zero(2), radii), Error);
  CHECK_THROWS_AS(Domain::polydisc(CVec::Zero(1), radii), DimensionError);
  CHECK_THROWS_AS(Domain::box({{0.0, 1.0}}), Error);          // odd count
  CHECK_THROWS_AS(Domain::box({{1.0, 0.0}, {0.0, 1.0}}), Error);  // lo > hi
}

TEST_CASE("containment and boundary gap agree") {
  const auto d = Domain::ball(cpoint({cplx(1.0, 0.0)}), 2.0);
  CHECK(d.contains_point(cpoint({cplx(1.0, 1.5)})));
  CHECK_FALSE(d.contains_point(cpoint({cplx(1.0, 2.5)})));
  CHECK(d.boundary_gap(cpoint({cplx(1.0, 0.0)})) == doctest::Approx(2.0));
  CHECK(d.boundary_gap(cpoint({cplx(4.0, 0.0)})) <= 0.0);

  const auto b = Domain::box({{-1.0, 1.0}, {0.0, 2.0}});
  CHECK(b.contains_point(cpoint({cplx(0.5, 1.0)})));
  CHECK_FALSE(b.contains_point(cpoint({cplx(0.5, -0.1)})));
  CHECK(b.boundary_gap(cpoint({cplx(0.0, 1.0)})) == doctest::Approx(1.0));
}

TEST_CASE("unitary construction rejects non-unitary frames") {
  CMat m = CMat::Identity(2, 2);
  m(0, 0) = cplx(1.1, 0.0);
  CHECK_THROWS_AS(Unitary(std::move(m)), Error);
  CHECK(Unitary::identity(3).defect() <= 1e-15);
  CHECK_THROWS_AS(Unitary::swap2(1), Error);
  const auto sw = Unitary::swap2(2);
  CHECK(sw.a(0, 1) == cplx(1.0, 0.0));
  CHECK(sw.a(0, 0) == cplx(0.0, 0.0));
}

TEST_CASE("haar unitaries are unitary and deterministic") {
  Rng rng(7);
  for (int k = 0; k < 10; ++k) {
    const auto u = haar_unitary(3, rng);
    CHECK(u.defect() <= 1e-12);
    CHECK(std::abs(std::abs(u.a.determinant()) - 1.0) <= 1e-12);
  }
  Rng r1(99), r2(99);
  CHECK(haar_unitary(2, r1).a == haar_unitary(2, r2).a);
}

TEST_CASE("cylinder volume matches the closed form and an MC oracle") {
  // |P| = pi r^2 * pi^{n-1} s^{2(n-1)} / (n-1)!
  const auto c1 = make_cylinder(CVec::Zero(1), 0.7);
  CHECK(volume(c1) == doctest::Approx(kPi * 0.49).epsilon(1e-14));

  const auto c2 = make_cylinder(CVec::Zero(2), 0.5, 0.3);
  CHECK(volume(c2) ==
        doctest::Approx(kPi * 0.25 * kPi * 0.09).epsilon(1e-14));

  Rng rng(11);
  const auto c3 = make_cylinder(CVec::Zero(3), 0.8, 0.6, haar_unitary(3, rng));
  const double closed = kPi * 0.64 * kPi * kPi * std::pow(0.6, 4) / 2.0;
  CHECK(volume(c3) == doctest::Approx(closed).epsilon(1e-14));
  const auto mc = oracle::mc_integral(
      c3, [](const CVec&) { return cplx(1.0, 0.0); }, 400000, 5);
  CHECK(std::abs(mc.value.real() - closed) <= 4.0 * mc.ci99 + 1e-12);
}

TEST_CASE("cylinder containment uses the enclosing ball") {
  const auto d = Domain::ball(CVec::Zero(2), 2.0);
  CHECK(contains(d, make_cylinder(CVec::Zero(2), 1.0, 0.2)));
  CHECK_FALSE(contains(d, make_cylinder(CVec::Zero(2), 2.1, 0.2)));
  // Fits in the ball but not with the full enclosing radius to spare.
  auto shifted = cpoint({cplx(1.6, 0.0), cplx(0.0, 0.0)});
  CHECK_FALSE(contains(d, make_cylinder(shifted, 0.5, 0.5)));
  CHECK(contains(d, make_cylinder(shifted, 0.2, 0.2)));
}

TEST_CASE("sampled cylinders respect the size policy") {
  const auto d = Domain::ball(CVec::Zero(2), 2.0);
  SizePolicy pol;
  for (std::uint64_t seed : {1ULL, 2ULL, 3ULL, 17ULL, 255ULL}) {
    const auto c = sample_cylinder(d, seed, pol);
    CHECK(contains(d, c));
    const double rho = std::hypot(c.r, c.s);
    CHECK(rho <= pol.rho_cap + 1e-12);
    CHECK(rho >= pol.min_rho);
    CHECK(c.frame.defect() <= 1e-12);
    // Deterministic in the seed.
    const auto c2 = sample_cylinder(d, seed, pol);
    CHECK(c.center == c2.center);
    CHECK(c.r == c2.r);
    CHECK(c.s == c2.s);
    CHECK(c.frame.a == c2.frame.a);
  }
  const auto a = sample_cylinder(d, 1);
  const auto b = sample_cylinder(d, 2);
  CHECK(a.center != b.center);
}

TEST_CASE("describe round-trips the shape mini-syntax") {
  CHECK(Domain::ball(CVec::Zero(1), 2.0).describe() == "ball:0:2");
  RVec radii(2);
  radii << 1.0, 0.5;
  const auto pd = Domain::polydisc(cpoint({cplx(0, 0), cplx(1, -1)}), radii);
  CHECK(pd.describe() == "polydisc:0,1-1i:1,0.5");
}

TEST_SUITE_END();
