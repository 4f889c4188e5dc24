#include <doctest.h>

#include <cmath>

#include "l2x/gram.hpp"
#include "l2x/quadrature.hpp"
#include "helpers.hpp"

using namespace l2x;
using testutil::cpoint;

TEST_SUITE_BEGIN("gram");

TEST_CASE("graded monomial enumeration") {
  const auto b13 = graded_monomials(1, 3);
  REQUIRE(b13.size() == 4);
  CHECK(b13[0] == MultiIndex{0});
  CHECK(b13[3] == MultiIndex{3});

  const auto b23 = graded_monomials(2, 3);
  CHECK(b23.size() == 10);  // C(2+3, 3)
  CHECK(b23[0] == MultiIndex{0, 0});
  // Degree blocks are contiguous and ascending.
  int prev = 0;
  for (const auto& alpha : b23) {
    const int deg = alpha[0] + alpha[1];
    CHECK(deg >= prev);
    prev = deg;
  }
  CHECK(graded_monomials(3, 5).size() == 56);  // C(3+5, 5)
}

TEST_CASE("assembled entries match direct integration") {
  const auto c = make_cylinder(cpoint({cplx(0.1, 0.2)}), 0.8);
  const auto w = catalog_weight("gauss", 1);
  const auto rule = cylinder_rule(1, 0.8, 0.0, 2);
  auto g = assemble_gram(c, w, 4, rule);
  REQUIRE(g.dim() == 5);
  for (int j = 0; j <= 4; ++j) {
    for (int k = 0; k <= j; ++k) {
      // Scaled monomials (w/r)^j conj(w/r)^k against e^{-phi(a + w)}.
      const cplx direct = integrate_raw(rule, [&](const CVec& v) {
        const cplx zw = v[0] / 0.8;
        cplx m(1.0, 0.0);
        for (int t = 0; t < j; ++t) m *= zw;
        for (int t = 0; t < k; ++t) m *= std::conj(zw);
        CVec z(1);
        z[0] = c.center[0] + v[0];
        return m * std::exp(-w(z));
      });
      CAPTURE(j);
      CAPTURE(k);
      CHECK(std::abs(g.G(j, k) - direct) <= 1e-12 * std::abs(direct) + 1e-15);
    }
  }
}

TEST_CASE("radial weights are minimized by the constant function") {
  const auto c = make_cylinder(CVec::Zero(1), 1.0);
  const auto w = catalog_weight("gauss", 1);
  const auto rule = cylinder_rule(1, 1.0, 0.0, 3);
  auto g = assemble_gram(c, w, 8, rule);
  auto f = min_extension(g);
  // Monomials are orthogonal here, so the minimum is the (0,0) entry.
  CHECK(std::abs(f.norm_sq - g.G(0, 0).real()) <= 1e-12 * g.G(0, 0).real());
  CHECK(f.coeffs_scaled[0] == cplx(1.0, 0.0));
  for (int k = 1; k < f.coeffs_scaled.size(); ++k)
    CHECK(std::abs(f.coeffs_scaled[k]) <= 1e-10);
  // And the known closed form pi (1 - e^{-1}).
  CHECK(f.norm_sq ==
        doctest::Approx(kPi * (1.0 - std::exp(-1.0))).epsilon(1e-10));
}

TEST_CASE("non-radial weights beat the constant candidate") {
  const auto c = make_cylinder(CVec::Zero(1), 1.0);
  const auto w = catalog_weight("gauss_tilt", 1);
  auto g = assemble_gram(c, w, 10, cylinder_rule(1, 1.0, 0.0, 3));
  auto f = min_extension(g);
  CHECK(f.norm_sq < g.G(0, 0).real() * (1.0 - 1e-3));
  // The constraint f(a) = 1 holds exactly at the center.
  CHECK(std::abs(f.eval(c, c.center) - cplx(1.0, 0.0)) <= 1e-14);
}

TEST_CASE("norms by degree are nonincreasing and match single solves") {
  const auto c = make_cylinder(cpoint({cplx(-0.3, 0.4)}), 0.9);
  const auto w = catalog_weight("gauss_tilt", 1);
  auto g = assemble_gram(c, w, 10, cylinder_rule(1, 0.9, 0.0, 3));
  const RVec norms = norm_sq_by_degree(g);
  REQUIRE(norms.size() == 11);
  for (int N = 1; N <= 10; ++N) CHECK(norms[N] <= norms[N - 1]);
  for (int N : {0, 3, 10}) {
    auto f = min_extension(g, N);
    CHECK(f.norm_sq == norms[N]);
    CHECK(f.degree == N);
    CHECK(kernel_diag(g, N) == doctest::Approx(1.0 / norms[N]).epsilon(1e-14));
  }
}

TEST_CASE("truncation keeps the leading block") {
  const auto c = make_cylinder(CVec::Zero(2), 0.6, 0.5);
  const auto w = catalog_weight("gauss", 2);
  auto g = assemble_gram(c, w, 4, cylinder_rule(2, 0.6, 0.5, 2));
  auto f2 = min_extension(g, 2);
  CHECK(f2.basis.size() == 6);  // C(2+2, 2)
  CHECK(static_cast<int>(f2.coeffs_scaled.size()) == 6);
}

TEST_CASE("underresolved systems are rejected") {
  const auto c = make_cylinder(CVec::Zero(1), 1.0);
  const auto w = catalog_weight("zero", 1);
  // Level 0 has 18 nodes; 21 monomials cannot be independent on them, so
  // the Gram matrix is singular.
  auto g = assemble_gram(c, w, 20, cylinder_rule(1, 1.0, 0.0, 0));
  CHECK_THROWS_AS(min_extension(g), SolveError);
}

TEST_CASE("weights that explode inside the cylinder are flagged") {
  const auto c = make_cylinder(CVec::Zero(1), 1.0);
  Weight bad;
  bad.name = "log_pole";
  bad.source = "test";
  bad.n = 1;
  bad.eval = [](const CVec& z) { return -2.0 * std::log(std::abs(z[0] - 0.5)); };
  // e^{-phi} = |z - 0.5|^2 is fine, but phi itself is +inf on a circle;
  // the assembly only sees nodes, so this works. A hard NaN does not.
  Weight nan_w;
  nan_w.name = "nan";
  nan_w.source = "test";
  nan_w.n = 1;
  nan_w.eval = [](const CVec&) { return std::nan(""); };
  CHECK_THROWS_AS(assemble_gram(c, nan_w, 4, cylinder_rule(1, 1.0, 0.0, 1)),
                  QuadratureError);
  CHECK_NOTHROW(assemble_gram(c, bad, 4, cylinder_rule(1, 1.0, 0.0, 1)));
}

TEST_CASE("parallel assembly equals the serial reference bit for bit") {
  const auto c = make_cylinder(cpoint({cplx(0.1, 0.0), cplx(0.0, -0.2)}), 0.7,
                               0.6);
  const auto w = catalog_weight("gauss_tilt", 2);
  const auto rule = cylinder_rule(2, 0.7, 0.6, 2);
  const auto a = assemble_gram(c, w, 6, rule);
  const auto b = assemble_gram_serial(c, w, 6, rule);
  CHECK((a.G - b.G).cwiseAbs().maxCoeff() == 0.0);
}

TEST_SUITE_END();
