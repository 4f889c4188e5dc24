#include "l2x/serialize.hpp"

namespace l2x {

namespace {

void write_complex(JsonWriter& w, const cplx& z) {
  w.begin_array().value(z.real()).value(z.imag()).end_array();
}

}  // namespace

void write_cylinder(JsonWriter& w, const Cylinder& c) {
  w.begin_object();
  w.key("center").begin_array();
  for (Eigen::Index j = 0; j < c.center.size(); ++j) write_complex(w, c.center[j]);
  w.end_array();
  w.key("r").value(c.r);
  w.key("s").value(c.s);
  w.key("frame").begin_array();
  for (int i = 0; i < c.frame.n(); ++i) {
    w.begin_array();
    for (int j = 0; j < c.frame.n(); ++j) write_complex(w, c.frame.a(i, j));
    w.end_array();
  }
  w.end_array();
  w.end_object();
}

void write_index_result(JsonWriter& w, const IndexResult& r, bool with_coeffs,
                        double tol_floor) {
  w.begin_object();
  w.key("sample_id").value(r.sample_id);
  if (r.cylinder.n() > 0) {
    w.key("cylinder");
    write_cylinder(w, r.cylinder);
  }
  w.key("L").value(r.L);
  w.key("bound").value(r.bound);
  w.key("norm_sq").value(r.norm_sq);
  w.key("trunc_err").value(r.trunc_err);
  w.key("quad_err").value(r.quad_err);
  w.key("N").value(r.degree);
  w.key("level").value(r.level);
  w.key("converged").value(r.converged);
  w.key("degenerate").value(r.degenerate);
  w.key("class").value(to_string(classify_cylinder(r, tol_floor)));
  w.key("unique").value(uniqueness_check(r, tol_floor));
  if (!r.error.empty()) w.key("error").value(r.error);
  if (with_coeffs && r.extremal.basis.size() > 0) {
    w.key("basis").begin_array();
    for (const auto& alpha : r.extremal.basis) {
      w.begin_array();
      for (int v : alpha) w.value(v);
      w.end_array();
    }
    w.end_array();
    w.key("coeffs").begin_array();
    for (int k = 0; k < static_cast<int>(r.extremal.basis.size()); ++k)
      write_complex(w, r.extremal.coeff(k));
    w.end_array();
  }
  w.end_object();
}

std::string index_result_json(const IndexResult& r, const std::string& weight,
                              const std::string& domain, bool with_coeffs) {
  JsonWriter w;
  w.begin_object();
  w.key("weight").value(weight);
  w.key("domain").value(domain);
  w.key("result");
  write_index_result(w, r, with_coeffs);
  w.end_object();
  return w.str();
}

std::string classify_json(const ClassifyOutcome& out, const std::string& weight,
                          const std::string& domain, int samples,
                          std::uint64_t seed) {
  JsonWriter w;
  w.begin_object();
  w.key("weight").value(weight);
  w.key("domain").value(domain);
  w.key("samples").value(samples);
  w.key("seed").value(static_cast<long long>(seed));
  const Verdict& v = out.verdict;
  w.key("verdict").begin_object();
  w.key("label").value(to_string(v.label));
  w.key("before_twists").value(to_string(v.before_twists));
  w.key("counts").begin_object();
  w.key("below").value(v.below);
  w.key("equal").value(v.equal);
  w.key("above").value(v.above);
  w.key("unresolved").value(v.unresolved);
  w.end_object();
  w.key("L_min").value(v.L_min);
  w.key("L_max").value(v.L_max);
  w.end_object();
  w.key("twists").begin_array();
  for (const auto& t : v.twists.entries) {
    w.begin_object();
    w.key("g").value(t.g);
    w.key("cylinder_id").value(t.cylinder_id);
    w.key("lhs").value(t.lhs);
    w.key("rhs").value(t.rhs);
    w.key("margin").value(t.margin);
    w.key("quad_err").value(t.quad_err);
    w.key("holds").value(t.holds);
    w.key("decisive").value(t.decisive);
    w.end_object();
  }
  w.end_array();
  w.key("results").begin_array();
  for (const auto& r : out.results) write_index_result(w, r, false);
  w.end_array();
  w.end_object();
  return w.str();
}

std::string sweep_csv(const std::vector<IndexResult>& results, double tol_floor) {
  std::string out = "sample_id,L,bound,norm_sq,trunc_err,quad_err,N,converged,class\n";
  for (const auto& r : results) {
    out += std::to_string(r.sample_id);
    out += ',';
    out += num12(r.L);
    out += ',';
    out += num12(r.bound);
    out += ',';
    out += num12(r.norm_sq);
    out += ',';
    out += num12(r.trunc_err);
    out += ',';
    out += num12(r.quad_err);
    out += ',';
    out += std::to_string(r.degree);
    out += ',';
    out += r.converged ? "true" : "false";
    out += ',';
    out += to_string(classify_cylinder(r, tol_floor));
    out += '\n';
  }
  return out;
}

}  // namespace l2x
