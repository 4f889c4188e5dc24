// Compares the OpenMP block-parallel kernels against the serial reference
// implementations that the tests use. Results must agree bit for bit; the
// point here is the wall-clock ratio.
#include <chrono>
#include <cstdio>

#include "l2x/extension_index.hpp"
#include "l2x/geometry.hpp"
#include "l2x/gram.hpp"
#include "l2x/parallel.hpp"
#include "l2x/quadrature.hpp"
#include "l2x/weights.hpp"

using namespace l2x;

namespace {

template <class F>
double time_once(F&& f) {
  const auto t0 = std::chrono::steady_clock::now();
  f();
  const auto t1 = std::chrono::steady_clock::now();
  return std::chrono::duration<double>(t1 - t0).count();
}

template <class F>
double time_best(F&& f, int reps) {
  double best = time_once(f);
  for (int i = 1; i < reps; ++i) best = std::min(best, time_once(f));
  return best;
}

void row(const char* name, double serial, double parallel, double maxdiff) {
  std::printf("%-28s %9.3fs %9.3fs %7.2fx   maxdiff %.3g\n", name, serial,
              parallel, serial / parallel, maxdiff);
}

}  // namespace

int main() {
  std::printf("threads: %d\n\n", par::jobs());
  std::printf("%-28s %10s %10s %8s\n", "kernel", "serial", "parallel", "speedup");

  {
    const auto c = make_cylinder(CVec::Zero(1), 1.0);
    const auto w = catalog_weight("gauss", 1);
    const auto rule = cylinder_rule(1, 1.0, 0.0, 7);
    auto f = [&](const CVec& z) { return cplx(std::exp(-w(z)), 0.0); };
    cplx a, b;
    const double ts = time_best([&] { a = integrate_serial(c, f, rule); }, 3);
    const double tp = time_best([&] { b = integrate(c, f, rule); }, 3);
    row("integrate n=1 level 7", ts, tp, std::abs(a - b));
  }

  {
    const auto c = make_cylinder(CVec::Zero(2), 0.8, 0.8);
    const auto w = catalog_weight("gauss", 2);
    const auto rule = cylinder_rule(2, 0.8, 0.8, 3);
    GramSystem gs, gp;
    const double ts = time_best([&] { gs = assemble_gram_serial(c, w, 8, rule); }, 2);
    const double tp = time_best([&] { gp = assemble_gram(c, w, 8, rule); }, 2);
    row("gram n=2 N=8 level 3", ts, tp,
        (gs.G - gp.G).cwiseAbs().maxCoeff());
  }

  {
    const auto d = Domain::ball(CVec::Zero(1), 2.0);
    const auto w = catalog_weight("gauss", 1);
    const int saved = par::jobs();
    std::vector<IndexResult> rs, rp;
    par::set_jobs(1);
    const double ts = time_once([&] { rs = index_sweep(d, w, 12, 7); });
    par::set_jobs(saved);
    const double tp = time_once([&] { rp = index_sweep(d, w, 12, 7); });
    double md = 0.0;
    for (std::size_t i = 0; i < rs.size(); ++i)
      md = std::max(md, std::abs(rs[i].L - rp[i].L));
    row("sweep n=1 x12", ts, tp, md);
  }

  return 0;
}
