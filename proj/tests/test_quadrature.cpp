#include <doctest.h>

#include <cmath>
#include <limits>

#include "l2x/oracle.hpp"
#include "l2x/quadrature.hpp"
#include "helpers.hpp"

using namespace l2x;
using testutil::cpoint;

TEST_SUITE_BEGIN("quadrature");

namespace {

double factorial(int k) {
  double f = 1.0;
  for (int i = 2; i <= k; ++i) f *= i;
  return f;
}

cplx monomial_raw(const QuadratureRule& rule,
                  const std::vector<int>& pow,
                  const std::vector<int>& bar) {
  return integrate_raw(rule, [&](const CVec& w) {
    cplx v(1.0, 0.0);
    for (std::size_t j = 0; j < pow.size(); ++j) {
      for (int k = 0; k < pow[j]; ++k) v *= w[static_cast<Eigen::Index>(j)];
      for (int k = 0; k < bar[j]; ++k)
        v *= std::conj(w[static_cast<Eigen::Index>(j)]);
    }
    return v;
  });
}

}  // namespace

TEST_CASE("weight sums reproduce the factor volumes") {
  CHECK(disc_rule(0.7, 12, 24).weight_sum() ==
        doctest::Approx(kPi * 0.49).epsilon(1e-12));
  CHECK(cylinder_rule(2, 0.5, 0.3, 1).weight_sum() ==
        doctest::Approx(kPi * 0.25 * kPi * 0.09).epsilon(1e-12));
  // |B^2_s| = pi^2 s^4 / 2.
  CHECK(ball_rule(0.6, 2, 1).weight_sum() ==
        doctest::Approx(kPi * kPi * std::pow(0.6, 4) / 2.0).epsilon(1e-12));
}

TEST_CASE("disc rule integrates monomials exactly") {
  const double r = 1.3;
  const auto rule = disc_rule(r, 6, 12);
  for (int j = 0; j <= 5; ++j) {
    const double exact = kPi * std::pow(r, 2 * j + 2) / (j + 1);
    const cplx got = monomial_raw(rule, {j}, {j});
    CHECK(std::abs(got - exact) <= 1e-12 * exact);
  }
  // Unequal powers integrate to zero by symmetry.
  CHECK(std::abs(monomial_raw(rule, {3}, {1})) <= 1e-13);
  CHECK(std::abs(monomial_raw(rule, {0}, {2})) <= 1e-13);
}

TEST_CASE("two-dimensional ball factor matches the Dirichlet formula") {
  const double s = 0.8;
  const auto rule = ball_rule(s, 2, 1);
  for (int a = 0; a <= 3; ++a) {
    for (int c = 0; c <= 3 - a; ++c) {
      const double exact = kPi * kPi * std::pow(s, 2 * (a + c) + 4) *
                           factorial(a) * factorial(c) / factorial(a + c + 2);
      const cplx got = monomial_raw(rule, {a, c}, {a, c});
      CAPTURE(a);
      CAPTURE(c);
      CHECK(std::abs(got - exact) <= 1e-11 * exact);
    }
  }
  CHECK(std::abs(monomial_raw(rule, {1, 0}, {0, 1})) <= 1e-12);
}

TEST_CASE("three-dimensional ball sampling is near the Dirichlet formula") {
  const double s = 0.9;
  const auto rule = ball_rule(s, 3, 1);
  CHECK(rule.kind == RuleKind::qmc);
  // Weights are normalized to the exact ball volume.
  const double vol = std::pow(kPi, 3) * std::pow(s, 6) / 6.0;
  CHECK(rule.weight_sum() == doctest::Approx(vol).epsilon(1e-12));
  const double exact = std::pow(kPi, 3) * std::pow(s, 8) / factorial(4);
  const cplx got = monomial_raw(rule, {1, 0, 0}, {1, 0, 0});
  CHECK(std::abs(got - exact) <= 0.02 * exact);
}

TEST_CASE("level_for_degree covers the Gram integrands") {
  CHECK(level_for_degree(1, 12) == 3);
  CHECK(level_for_degree(1, 5) == 1);
  CHECK(level_for_degree(2, 8) == 2);
  CHECK(level_for_degree(3, 5) == 1);
  for (int n = 1; n <= 3; ++n)
    for (int N = 0; N <= 16; ++N) {
      const int l = level_for_degree(n, N);
      CHECK(3 * (1 << l) >= N + 1);
      if (n >= 2) CHECK(4 * (1 << l) >= N + 2);
    }
}

TEST_CASE("node doubling drives the error down on a peaked integrand") {
  const auto c = make_cylinder(CVec::Zero(1), 1.0);
  auto f = [](const CVec& z) { return cplx(1.0 / (1.02 - z[0].real()), 0.0); };
  const double ref = integrate(c, f, cylinder_rule(1, 1.0, 0.0, 8)).real();
  double prev = std::numeric_limits<double>::infinity();
  for (int level = 2; level <= 5; ++level) {
    const double got = integrate(c, f, cylinder_rule(1, 1.0, 0.0, level)).real();
    const double err = std::abs(got - ref);
    CAPTURE(level);
    if (prev > 1e-12) CHECK(err < 0.5 * prev);
    prev = err;
  }
  CHECK(prev <= 1e-8 * std::abs(ref));
}

TEST_CASE("parallel and serial integration agree bitwise") {
  const auto c = make_cylinder(cpoint({cplx(0.2, -0.1)}), 0.9);
  auto f = [](const CVec& z) { return std::exp(-z[0] * std::conj(z[0])); };
  const auto rule = cylinder_rule(1, 0.9, 0.0, 4);
  const cplx a = integrate(c, f, rule);
  const cplx b = integrate_serial(c, f, rule);
  CHECK(a.real() == b.real());
  CHECK(a.imag() == b.imag());
}

TEST_CASE("integration pulls back through the frame") {
  // Rotating the frame leaves a radial integrand invariant.
  Rng rng(21);
  const auto u = haar_unitary(2, rng);
  const auto c0 = make_cylinder(CVec::Zero(2), 0.7, 0.5);
  const auto c1 = make_cylinder(CVec::Zero(2), 0.7, 0.5, u);
  auto f = [](const CVec& z) { return std::exp(-cplx(z.squaredNorm(), 0.0)); };
  const auto rule = cylinder_rule(2, 0.7, 0.5, 2);
  const cplx a = integrate(c0, f, rule);
  const cplx b = integrate(c1, f, rule);
  CHECK(std::abs(a - b) <= 1e-12 * std::abs(a));
}

TEST_CASE("two-level estimates bound the real error on smooth integrands") {
  const auto c = make_cylinder(CVec::Zero(1), 1.0);
  auto f = [](const CVec& z) { return std::exp(-z[0] * std::conj(z[0])); };
  const auto res = integrate_with_error(c, f, 2);
  const double truth = kPi * (1.0 - std::exp(-1.0));
  CHECK(std::abs(res.value.real() - truth) <= 10.0 * res.err + 1e-12);
  CHECK(res.err <= 1e-6);
}

TEST_CASE("non-finite integrand values are reported with the node") {
  const auto c = make_cylinder(CVec::Zero(1), 1.0);
  auto g = [](const CVec&) {
    return cplx(std::numeric_limits<double>::infinity(), 0.0);
  };
  CHECK_THROWS_AS(integrate(c, g, cylinder_rule(1, 1.0, 0.0, 1)),
                  QuadratureError);
  try {
    integrate(c, g, cylinder_rule(1, 1.0, 0.0, 1));
  } catch (const QuadratureError& e) {
    CHECK(std::string(e.what()).find("node") != std::string::npos);
  }
}

TEST_CASE("oversized rules are rejected up front") {
  CHECK_THROWS_AS(cylinder_rule(3, 1.0, 1.0, 4), Error);
}

TEST_SUITE_END();
