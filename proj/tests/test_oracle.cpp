#include <doctest.h>

#include <cmath>

#include "l2x/oracle.hpp"
#include "helpers.hpp"

using namespace l2x;
using testutil::cpoint;

TEST_SUITE_BEGIN("oracle");

TEST_CASE("adaptive Simpson on smooth integrands") {
  CHECK(oracle::simpson([](double x) { return x * x * x; }, 0.0, 1.0) ==
        doctest::Approx(0.25).epsilon(1e-13));
  CHECK(oracle::simpson([](double x) { return std::sin(x); }, 0.0, kPi) ==
        doctest::Approx(2.0).epsilon(1e-12));
  CHECK(oracle::simpson([](double x) { return std::exp(-x * x); }, -3.0, 3.0) ==
        doctest::Approx(std::sqrt(kPi) * std::erf(3.0)).epsilon(1e-9));
}

TEST_CASE("radial index anchors") {
  auto sq = [](double t) { return t * t; };
  auto nsq = [](double t) { return -t * t; };
  CHECK(oracle::radial_index(sq, 1.0) ==
        doctest::Approx(1.0 - std::exp(-1.0)).epsilon(1e-12));
  CHECK(oracle::radial_index(nsq, 1.0) ==
        doctest::Approx(std::exp(1.0) - 1.0).epsilon(1e-12));
  // r = 0.5: (1 - e^{-1/4}) / (1/4).
  CHECK(oracle::radial_index(sq, 0.5) ==
        doctest::Approx((1.0 - std::exp(-0.25)) / 0.25).epsilon(1e-12));
  // Flat weight gives exactly one.
  CHECK(oracle::radial_index([](double) { return 2.0; }, 0.8) ==
        doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("Monte Carlo integration is deterministic and calibrated") {
  const auto c = make_cylinder(cpoint({cplx(0.5, 0.5)}), 0.75);
  auto one = [](const CVec&) { return cplx(1.0, 0.0); };
  const auto a = oracle::mc_integral(c, one, 200000, 9);
  const auto b = oracle::mc_integral(c, one, 200000, 9);
  CHECK(a.value == b.value);
  CHECK(a.samples == 200000);
  // Acceptance rate for a disc in its bounding square is pi / 4.
  CHECK(a.efficiency == doctest::Approx(kPi / 4.0).epsilon(0.02));
  CHECK(std::abs(a.value.real() - kPi * 0.5625) <= 4.0 * a.ci99 + 1e-12);
  const auto other = oracle::mc_integral(c, one, 200000, 10);
  CHECK(other.value != a.value);
}

TEST_CASE("closed-form minimizer attains the reference bound") {
  const auto h = Poly::parse("z1+0.5*z1^2", 1);
  const auto c = make_cylinder(cpoint({cplx(0.2, -0.1)}), 0.6);
  const auto f = oracle::pluriharmonic_extremal(h, c);
  CHECK(std::abs(f(c.center) - cplx(1.0, 0.0)) <= 1e-15);
  // Integral of |f|^2 e^{-2 Re h} over the cylinder equals its volume
  // times e^{-2 Re h(a)}; check by Monte Carlo.
  const auto mc = oracle::mc_integral(
      c,
      [&](const CVec& z) {
        return cplx(std::norm(f(z)) * std::exp(-2.0 * h.eval(z).real()), 0.0);
      },
      400000, 3);
  const double bound = volume(c) * std::exp(-2.0 * h.eval(c.center).real());
  CHECK(std::abs(mc.value.real() - bound) <= 4.0 * mc.ci99 + 1e-12);
}

TEST_SUITE_END();
