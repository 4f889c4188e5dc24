#include <cstdio>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "l2x/classify.hpp"
#include "l2x/extension_index.hpp"
#include "l2x/geometry.hpp"
#include "l2x/gram.hpp"
#include "l2x/jsonfmt.hpp"
#include "l2x/oracle.hpp"
#include "l2x/parallel.hpp"
#include "l2x/selftest.hpp"
#include "l2x/serialize.hpp"
#include "l2x/weights.hpp"

namespace {

using namespace l2x;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Accepts "1.5", "2i", "i", "-i", "1+2i", "-0.5-0.25i".
cplx parse_complex(const std::string& in) {
  std::string s;
  for (char c : in)
    if (!std::isspace(static_cast<unsigned char>(c))) s += c;
  if (s.empty()) throw UsageError("empty complex number");
  double re = 0.0, im = 0.0;
  bool saw_re = false, saw_im = false;
  std::size_t pos = 0;
  while (pos < s.size()) {
    double sign = 1.0;
    if (s[pos] == '+' || s[pos] == '-') {
      sign = s[pos] == '-' ? -1.0 : 1.0;
      ++pos;
    } else if (pos > 0) {
      throw UsageError("malformed complex number '" + in + "'");
    }
    double mag;
    std::size_t used = 0;
    if (pos < s.size() && (s[pos] == 'i' || s[pos] == 'I')) {
      mag = 1.0;
    } else {
      try {
        mag = std::stod(s.substr(pos), &used);
      } catch (...) {
        throw UsageError("malformed complex number '" + in + "'");
      }
    }
    pos += used;
    if (pos < s.size() && (s[pos] == 'i' || s[pos] == 'I')) {
      ++pos;
      if (saw_im) throw UsageError("two imaginary parts in '" + in + "'");
      im = sign * mag;
      saw_im = true;
    } else {
      if (used == 0 || saw_re)
        throw UsageError("malformed complex number '" + in + "'");
      re = sign * mag;
      saw_re = true;
    }
  }
  return {re, im};
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::size_t start = 0;
  for (std::size_t i = 0; i <= s.size(); ++i) {
    if (i == s.size() || s[i] == sep) {
      out.push_back(s.substr(start, i - start));
      start = i + 1;
    }
  }
  return out;
}

CVec parse_complex_list(const std::string& s) {
  const auto parts = split(s, ',');
  CVec v(static_cast<Eigen::Index>(parts.size()));
  for (std::size_t i = 0; i < parts.size(); ++i)
    v[static_cast<Eigen::Index>(i)] = parse_complex(parts[i]);
  return v;
}

// Shapes: ball:<center>:<radius>, polydisc:<center>:<r1,...,rn>,
// box:<lo,hi;lo,hi;...> with two intervals per complex coordinate.
Domain parse_domain(const std::string& s) {
  const auto head = s.find(':');
  if (head == std::string::npos)
    throw UsageError("domain '" + s + "' needs a shape prefix");
  const std::string shape = s.substr(0, head);
  const std::string rest = s.substr(head + 1);
  try {
    if (shape == "ball") {
      const auto sep = rest.rfind(':');
      if (sep == std::string::npos)
        throw UsageError("ball domain needs ball:<center>:<radius>");
      return Domain::ball(parse_complex_list(rest.substr(0, sep)),
                          std::stod(rest.substr(sep + 1)));
    }
    if (shape == "polydisc") {
      const auto sep = rest.rfind(':');
      if (sep == std::string::npos)
        throw UsageError("polydisc domain needs polydisc:<center>:<radii>");
      const auto radii_s = split(rest.substr(sep + 1), ',');
      RVec radii(static_cast<Eigen::Index>(radii_s.size()));
      for (std::size_t i = 0; i < radii_s.size(); ++i)
        radii[static_cast<Eigen::Index>(i)] = std::stod(radii_s[i]);
      return Domain::polydisc(parse_complex_list(rest.substr(0, sep)), radii);
    }
    if (shape == "box") {
      std::vector<std::pair<double, double>> ivs;
      for (const auto& part : split(rest, ';')) {
        const auto nums = split(part, ',');
        if (nums.size() != 2)
          throw UsageError("box interval '" + part + "' needs lo,hi");
        ivs.emplace_back(std::stod(nums[0]), std::stod(nums[1]));
      }
      return Domain::box(std::move(ivs));
    }
  } catch (const UsageError&) {
    throw;
  } catch (const std::exception& e) {
    throw UsageError("bad domain '" + s + "': " + e.what());
  }
  throw UsageError("unknown domain shape '" + shape + "'");
}

Unitary parse_frame(const std::string& name, int n, std::uint64_t seed) {
  if (name == "identity") return Unitary::identity(n);
  if (name == "swap") {
    if (n < 2) throw UsageError("--frame swap needs dimension >= 2");
    return Unitary::swap2(n);
  }
  if (name == "random") {
    Rng rng(substream(seed, 0xF7A3E));
    return haar_unitary(n, rng);
  }
  throw UsageError("unknown frame '" + name + "' (identity|random|swap)");
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw Error("cannot open '" + path + "' for writing");
  f << content;
  if (!f.good()) throw Error("failed writing '" + path + "'");
}

void dump_gram_json(const std::string& path, const Cylinder& c, const Weight& w,
                    const IndexResult& res) {
  auto gram = assemble_gram(c, w, res.degree,
                            cylinder_rule(c.n(), c.r, c.s, res.level));
  const auto f = min_extension(gram);
  JsonWriter j;
  j.begin_object();
  j.key("degree").value(gram.degree);
  j.key("basis").begin_array();
  for (const auto& alpha : gram.basis) {
    j.begin_array();
    for (int v : alpha) j.value(v);
    j.end_array();
  }
  j.end_array();
  j.key("scale").begin_array();
  for (Eigen::Index i = 0; i < gram.scale.size(); ++i) j.value(gram.scale[i]);
  j.end_array();
  j.key("gram_re").begin_array();
  for (int i = 0; i < gram.dim(); ++i) {
    j.begin_array();
    for (int k = 0; k < gram.dim(); ++k) j.value(gram.G(i, k).real());
    j.end_array();
  }
  j.end_array();
  j.key("gram_im").begin_array();
  for (int i = 0; i < gram.dim(); ++i) {
    j.begin_array();
    for (int k = 0; k < gram.dim(); ++k) j.value(gram.G(i, k).imag());
    j.end_array();
  }
  j.end_array();
  j.key("cond_estimate").value(gram.cond_estimate);
  j.key("coeffs_scaled").begin_array();
  for (Eigen::Index i = 0; i < f.coeffs_scaled.size(); ++i)
    j.begin_array().value(f.coeffs_scaled[i].real()).value(f.coeffs_scaled[i].imag()).end_array();
  j.end_array();
  j.key("norm_sq").value(f.norm_sq);
  j.end_object();
  write_file(path, j.str() + "\n");
}

int cmd_index(const std::string& weight_s, const std::string& domain_s,
              const std::string& center_s, double r, double s,
              const std::string& frame_s, std::uint64_t seed, int degree,
              int quad_level, bool coeffs, const std::string& dump_gram,
              const std::string& out_path) {
  const Domain dom = parse_domain(domain_s);
  const Weight w = [&] {
    try {
      return resolve_weight(weight_s, dom.n);
    } catch (const std::exception& e) {
      throw UsageError(e.what());
    }
  }();
  const CVec center = parse_complex_list(center_s);
  if (static_cast<int>(center.size()) != dom.n)
    throw UsageError("--center has " + std::to_string(center.size()) +
                     " coordinates but the domain has dimension " +
                     std::to_string(dom.n));
  if (dom.n >= 2 && s <= 0.0) s = r;
  const Cylinder cyl =
      make_cylinder(center, r, dom.n >= 2 ? s : 0.0, parse_frame(frame_s, dom.n, seed));
  if (!contains(dom, cyl))
    throw UsageError("the cylinder does not fit inside the domain");

  Tolerances tol;
  tol.degree = degree;
  tol.quad_level = quad_level;
  const IndexResult res = l2_index(cyl, w, tol);
  if (!dump_gram.empty() && !res.degenerate) dump_gram_json(dump_gram, cyl, w, res);

  const std::string json = index_result_json(res, w.source, dom.describe(), coeffs);
  if (out_path.empty())
    std::cout << json << "\n";
  else
    write_file(out_path, json + "\n");
  return res.converged ? 0 : 2;
}

int cmd_classify(const std::string& weight_s, const std::string& domain_s,
                 int samples, std::uint64_t seed, int degree, int quad_level,
                 double rho_cap, const std::vector<std::string>& twist_s,
                 const std::string& out_path, const std::string& csv_path) {
  const Domain dom = parse_domain(domain_s);
  const Weight w = [&] {
    try {
      return resolve_weight(weight_s, dom.n);
    } catch (const std::exception& e) {
      throw UsageError(e.what());
    }
  }();
  Tolerances tol;
  tol.degree = degree;
  tol.quad_level = quad_level;
  SizePolicy policy;
  if (rho_cap > 0.0) policy.rho_cap = rho_cap;
  std::vector<Poly> extra;
  for (const auto& src : twist_s) {
    try {
      extra.push_back(Poly::parse(src, dom.n));
    } catch (const std::exception& e) {
      throw UsageError(std::string("bad --twist: ") + e.what());
    }
  }

  const ClassifyOutcome out = classify_weight(dom, w, samples, seed, tol, policy, extra);

  if (!out_path.empty())
    write_file(out_path, classify_json(out, w.source, dom.describe(), samples, seed) + "\n");
  if (!csv_path.empty()) write_file(csv_path, sweep_csv(out.results));

  const Verdict& v = out.verdict;
  std::printf("weight   %s\n", w.source.c_str());
  std::printf("domain   %s\n", dom.describe().c_str());
  std::printf("samples  %d (below %d, equal %d, above %d, unresolved %d)\n",
              samples, v.below, v.equal, v.above, v.unresolved);
  std::printf("L range  [%s, %s]\n", num12(v.L_min).c_str(), num12(v.L_max).c_str());
  std::printf("twists   %d probes, %d decisive violations\n",
              static_cast<int>(v.twists.entries.size()), v.twists.violations);
  std::printf("verdict  %s\n", to_string(v.label));
  return 0;
}

int cmd_oracle_radial(const std::string& weight_s, double r, double tol) {
  const Weight w = resolve_weight(weight_s, 1);
  // The closed form assumes a radial weight; spot-check that assumption.
  OracleRng rng(17);
  auto p = [&w](double t) { return w.eval(CVec::Constant(1, cplx(t, 0.0))); };
  for (int k = 0; k < 16; ++k) {
    const double t = rng.uniform() * r;
    const double ang = rng.uniform() * 2.0 * kPi;
    const double v =
        w.eval(CVec::Constant(1, cplx(t * std::cos(ang), t * std::sin(ang))));
    if (std::abs(v - p(t)) > 1e-10 * (1.0 + std::abs(v)))
      throw UsageError("weight is not radial; the radial oracle does not apply");
  }
  const double L = oracle::radial_index(p, r, tol);
  JsonWriter j;
  j.begin_object();
  j.key("weight").value(weight_s);
  j.key("r").value(r);
  j.key("L").value(L);
  j.end_object();
  std::cout << j.str() << "\n";
  return 0;
}

int cmd_oracle_mc(const std::string& weight_s, const std::string& center_s,
                  double r, double s, const std::string& frame_s,
                  std::uint64_t seed, long long samples,
                  const std::string& integrand) {
  const CVec center = parse_complex_list(center_s);
  const int n = static_cast<int>(center.size());
  const Weight w = resolve_weight(weight_s, n);
  const Cylinder cyl =
      make_cylinder(center, r, n >= 2 ? (s > 0 ? s : r) : 0.0,
                    parse_frame(frame_s, n, seed));
  std::function<cplx(const CVec&)> f;
  if (integrand == "exp-weight")
    f = [&w](const CVec& z) { return cplx(std::exp(-w(z)), 0.0); };
  else if (integrand == "one")
    f = [](const CVec&) { return cplx(1.0, 0.0); };
  else
    throw UsageError("unknown --integrand (exp-weight|one)");
  const auto res = oracle::mc_integral(cyl, f, static_cast<std::size_t>(samples), seed);
  JsonWriter j;
  j.begin_object();
  j.key("value").value(res.value.real());
  j.key("ci99").value(res.ci99);
  j.key("samples").value(static_cast<long long>(res.samples));
  j.key("efficiency").value(res.efficiency);
  j.end_object();
  std::cout << j.str() << "\n";
  return 0;
}

int cmd_oracle_extremal(const std::string& h_s, const std::string& center_s,
                        double r, double s, const std::string& frame_s,
                        std::uint64_t seed, long long samples) {
  const CVec center = parse_complex_list(center_s);
  const int n = static_cast<int>(center.size());
  Poly h;
  try {
    h = Poly::parse(h_s, n);
  } catch (const std::exception& e) {
    throw UsageError(e.what());
  }
  const Cylinder cyl = make_cylinder(center, r, n >= 2 ? (s > 0 ? s : r) : 0.0,
                                     parse_frame(frame_s, n, seed));
  // For phi = 2 Re h the minimizer is exp(h - h(a)) and attains the
  // reference bound; report the Monte Carlo ratio, which should be 1.
  const auto f = oracle::pluriharmonic_extremal(h, cyl);
  const auto res = oracle::mc_integral(
      cyl,
      [&](const CVec& z) {
        return cplx(std::norm(f(z)) * std::exp(-2.0 * h.eval(z).real()), 0.0);
      },
      static_cast<std::size_t>(samples), seed);
  const double bound = volume(cyl) * std::exp(-2.0 * h.eval(cyl.center).real());
  JsonWriter j;
  j.begin_object();
  j.key("h").value(h_s);
  j.key("ratio").value(res.value.real() / bound);
  j.key("ci99").value(res.ci99 / bound);
  j.key("samples").value(static_cast<long long>(res.samples));
  j.end_object();
  std::cout << j.str() << "\n";
  return 0;
}

int cmd_selftest(bool quick, bool inject_fault) {
  if (inject_fault) detail::set_volume_fault_scale(1.01);
  int failures = 0;
  const auto results = run_selftest(quick, [&](const CheckResult& r) {
    std::printf("%-4s %-32s %s (%.2fs)\n", r.pass ? "ok" : "FAIL",
                r.name.c_str(), r.detail.c_str(), r.seconds);
    std::fflush(stdout);
  });
  for (const auto& r : results)
    if (!r.pass) ++failures;
  std::printf("%d/%d checks passed\n", static_cast<int>(results.size()) - failures,
              static_cast<int>(results.size()));
  return failures == 0 ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"L2 extension index of weighted cylinders"};
  app.require_subcommand(1);
  app.fallthrough();

  int jobs = 0;
  app.add_option("--jobs", jobs, "worker threads (default: L2EXT_JOBS or all cores)");

  std::string weight_s, domain_s, center_s, frame_s = "identity";
  std::string out_path, csv_path, dump_gram, integrand = "exp-weight", h_s;
  double r = 0.0, s = -1.0, tol = 1e-12, rho_cap = -1.0;
  std::uint64_t seed = 1;
  int degree = -1, quad_level = -1, samples = 20;
  long long mc_samples = 200000;
  bool coeffs = false, quick = false, inject_fault = false;

  auto* idx = app.add_subcommand("index", "evaluate one cylinder");
  idx->add_option("--weight", weight_s, "catalog:<name> or an expression")->required();
  idx->add_option("--domain", domain_s, "ball:<c>:<R> | polydisc:<c>:<radii> | box:<lo,hi;...>")->required();
  idx->add_option("--center", center_s, "cylinder center, comma-separated complex")->required();
  idx->add_option("--r", r, "disc radius")->required()->check(CLI::PositiveNumber);
  idx->add_option("--s", s, "ball radius (default: r)");
  idx->add_option("--frame", frame_s, "identity|random|swap");
  idx->add_option("--seed", seed, "seed for random frames");
  idx->add_option("--degree", degree, "pin the polynomial degree");
  idx->add_option("--quad-level", quad_level, "pin the quadrature level");
  idx->add_flag("--coeffs", coeffs, "include minimizer coefficients");
  idx->add_option("--dump-gram", dump_gram, "write the Gram system to a JSON file");
  idx->add_option("--out", out_path, "write the result JSON here instead of stdout");

  auto* cls = app.add_subcommand("classify", "sweep a domain and classify the weight");
  cls->add_option("--weight", weight_s)->required();
  cls->add_option("--domain", domain_s)->required();
  cls->add_option("--samples", samples, "number of sampled cylinders");
  cls->add_option("--seed", seed);
  cls->add_option("--degree", degree);
  cls->add_option("--quad-level", quad_level);
  cls->add_option("--rho-cap", rho_cap, "cap on sampled cylinder size");
  std::vector<std::string> twist_s;
  cls->add_option("--twist", twist_s, "extra twist polynomial (repeatable)");
  cls->add_option("--out", out_path, "write the full JSON report here");
  cls->add_option("--csv", csv_path, "write the per-cylinder CSV here");

  auto* orc = app.add_subcommand("oracle", "independent reference computations");
  orc->require_subcommand(1);
  auto* orad = orc->add_subcommand("radial", "closed form for radial weights, n=1, a=0");
  orad->add_option("--weight", weight_s)->required();
  orad->add_option("--r", r)->required()->check(CLI::PositiveNumber);
  orad->add_option("--tol", tol);
  auto* omc = orc->add_subcommand("mc", "Monte Carlo integral over a cylinder");
  omc->add_option("--weight", weight_s)->required();
  omc->add_option("--center", center_s)->required();
  omc->add_option("--r", r)->required()->check(CLI::PositiveNumber);
  omc->add_option("--s", s);
  omc->add_option("--frame", frame_s);
  omc->add_option("--seed", seed);
  omc->add_option("--samples", mc_samples);
  omc->add_option("--integrand", integrand, "exp-weight|one");
  auto* oex = orc->add_subcommand("extremal", "check the closed-form minimizer");
  oex->add_option("--hpoly", h_s, "holomorphic polynomial h; the weight is 2 Re h")->required();
  oex->add_option("--center", center_s)->required();
  oex->add_option("--r", r)->required()->check(CLI::PositiveNumber);
  oex->add_option("--s", s);
  oex->add_option("--frame", frame_s);
  oex->add_option("--seed", seed);
  oex->add_option("--samples", mc_samples);

  auto* st = app.add_subcommand("selftest", "run the built-in consistency checks");
  st->add_flag("--quick", quick, "smaller samples, skip the slowest checks");
  st->add_flag("--inject-volume-fault", inject_fault)->group("");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);  // --help
    app.exit(e);
    return 64;
  }

  if (jobs > 0) par::set_jobs(jobs);

  try {
    if (*idx)
      return cmd_index(weight_s, domain_s, center_s, r, s, frame_s, seed, degree,
                       quad_level, coeffs, dump_gram, out_path);
    if (*cls)
      return cmd_classify(weight_s, domain_s, samples, seed, degree, quad_level,
                          rho_cap, twist_s, out_path, csv_path);
    if (*orad) return cmd_oracle_radial(weight_s, r, tol);
    if (*omc)
      return cmd_oracle_mc(weight_s, center_s, r, s, frame_s, seed, mc_samples,
                           integrand);
    if (*oex)
      return cmd_oracle_extremal(h_s, center_s, r, s, frame_s, seed, mc_samples);
    if (*st) return cmd_selftest(quick, inject_fault);
  } catch (const UsageError& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 64;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
  return 64;
}
