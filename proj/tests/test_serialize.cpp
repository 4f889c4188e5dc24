#include <doctest.h>

#include <fstream>
#include <limits>
#include <map>
#include <string>

#include <json.hpp>

#include "l2x/classify.hpp"
#include "l2x/extension_index.hpp"
#include "l2x/serialize.hpp"
#include "helpers.hpp"

using namespace l2x;
using nlohmann::json;
using testutil::cpoint;

TEST_SUITE_BEGIN("serialize");

namespace {

// Small validator covering the subset of JSON Schema the files use:
// type, enum, oneOf, required, properties, additionalProperties,
// items, minItems, maxItems, minimum and $ref (same or sibling document).

struct SchemaSet {
  std::map<std::string, json> docs;
};

SchemaSet load_schemas() {
  SchemaSet ss;
  for (const char* name :
       {"index_result.schema.json", "classify_result.schema.json"}) {
    std::ifstream f(std::string(SCHEMA_DIR) + "/" + name);
    REQUIRE(f.good());
    ss.docs[name] = json::parse(f);
  }
  return ss;
}

const json* deref(const SchemaSet& ss, std::string& doc, const std::string& ref) {
  std::string frag = ref;
  const auto hash = ref.find('#');
  if (hash == std::string::npos) {
    doc = ref;
    frag.clear();
  } else {
    if (hash > 0) doc = ref.substr(0, hash);
    frag = ref.substr(hash + 1);
  }
  const json* cur = &ss.docs.at(doc);
  std::size_t pos = frag.empty() ? std::string::npos : 1;
  while (pos != std::string::npos && pos < frag.size()) {
    const auto next = frag.find('/', pos);
    const std::string token = frag.substr(pos, next - pos);
    cur = &cur->at(token);
    pos = next == std::string::npos ? next : next + 1;
  }
  return cur;
}

bool validate(const SchemaSet& ss, std::string doc, const json& schema,
              const json& value, std::string& err, const std::string& path) {
  if (schema.contains("$ref")) {
    const json* target = deref(ss, doc, schema["$ref"].get<std::string>());
    return validate(ss, doc, *target, value, err, path);
  }
  if (schema.contains("oneOf")) {
    int hits = 0;
    for (const auto& alt : schema["oneOf"]) {
      std::string ignored;
      if (validate(ss, doc, alt, value, ignored, path)) ++hits;
    }
    if (hits != 1) {
      err = path + ": matched " + std::to_string(hits) + " oneOf branches";
      return false;
    }
    return true;
  }
  if (schema.contains("type")) {
    const std::string t = schema["type"].get<std::string>();
    const bool ok =
        (t == "object" && value.is_object()) ||
        (t == "array" && value.is_array()) ||
        (t == "string" && value.is_string()) ||
        (t == "boolean" && value.is_boolean()) ||
        (t == "number" && value.is_number()) ||
        (t == "integer" && value.is_number_integer());
    if (!ok) {
      err = path + ": expected " + t;
      return false;
    }
  }
  if (schema.contains("enum")) {
    bool found = false;
    for (const auto& e : schema["enum"]) found |= (e == value);
    if (!found) {
      err = path + ": not in enum";
      return false;
    }
  }
  if (schema.contains("minimum") && value.is_number()) {
    if (value.get<double>() < schema["minimum"].get<double>()) {
      err = path + ": below minimum";
      return false;
    }
  }
  if (value.is_object()) {
    if (schema.contains("required")) {
      for (const auto& k : schema["required"]) {
        if (!value.contains(k.get<std::string>())) {
          err = path + ": missing " + k.get<std::string>();
          return false;
        }
      }
    }
    const bool closed = schema.contains("additionalProperties") &&
                        schema["additionalProperties"] == false;
    for (const auto& [k, v] : value.items()) {
      if (schema.contains("properties") && schema["properties"].contains(k)) {
        if (!validate(ss, doc, schema["properties"][k], v, err, path + "/" + k))
          return false;
      } else if (closed) {
        err = path + ": unexpected key " + k;
        return false;
      }
    }
  }
  if (value.is_array()) {
    if (schema.contains("minItems") &&
        value.size() < schema["minItems"].get<std::size_t>()) {
      err = path + ": too few items";
      return false;
    }
    if (schema.contains("maxItems") &&
        value.size() > schema["maxItems"].get<std::size_t>()) {
      err = path + ": too many items";
      return false;
    }
    if (schema.contains("items")) {
      for (std::size_t i = 0; i < value.size(); ++i) {
        if (!validate(ss, doc, schema["items"], value[i], err,
                      path + "/" + std::to_string(i)))
          return false;
      }
    }
  }
  return true;
}

bool check_schema(const std::string& doc, const std::string& payload,
                  std::string& err) {
  static const SchemaSet ss = load_schemas();
  const json v = json::parse(payload);
  return validate(ss, doc, ss.docs.at(doc), v, err, "$");
}

}  // namespace

TEST_CASE("index result JSON validates against its schema") {
  const auto c = make_cylinder(cpoint({cplx(0.2, 0.1)}), 0.7);
  const auto res = l2_index(c, catalog_weight("gauss", 1));
  const std::string payload = index_result_json(res, "catalog:gauss", "ball:0:2", true);
  std::string err;
  CHECK_MESSAGE(check_schema("index_result.schema.json", payload, err), err);

  // Field order is pinned.
  const auto p = [&](const char* k) { return payload.find(k); };
  CHECK(p("\"sample_id\"") < p("\"L\""));
  CHECK(p("\"L\"") < p("\"bound\""));
  CHECK(p("\"bound\"") < p("\"norm_sq\""));
  CHECK(p("\"norm_sq\"") < p("\"trunc_err\""));
  CHECK(p("\"quad_err\"") < p("\"N\""));
  CHECK(p("\"converged\"") < p("\"class\""));
  CHECK(p("\"basis\"") < p("\"coeffs\""));
}

TEST_CASE("degenerate values serialize as tagged strings") {
  Weight minus;
  minus.name = "minus_inf";
  minus.source = "test";
  minus.n = 1;
  minus.eval = [](const CVec& z) {
    return z[0] == cplx(0.0, 0.0) ? -std::numeric_limits<double>::infinity()
                                  : 0.0;
  };
  const auto res = l2_index(make_cylinder(CVec::Zero(1), 0.5), minus);
  const std::string payload = index_result_json(res, "test", "ball:0:2", false);
  CHECK(payload.find("\"bound\":\"inf\"") != std::string::npos);
  std::string err;
  CHECK_MESSAGE(check_schema("index_result.schema.json", payload, err), err);
}

TEST_CASE("classification JSON validates and is reproducible") {
  const auto d = Domain::ball(CVec::Zero(1), 2.0);
  const auto out = classify_weight(d, catalog_weight("gauss", 1), 3, 77);
  const std::string a = classify_json(out, "catalog:gauss", d.describe(), 3, 77);
  const std::string b = classify_json(out, "catalog:gauss", d.describe(), 3, 77);
  CHECK(a == b);
  std::string err;
  CHECK_MESSAGE(check_schema("classify_result.schema.json", a, err), err);

  const auto out2 = classify_weight(d, catalog_weight("gauss", 1), 3, 77);
  CHECK(classify_json(out2, "catalog:gauss", d.describe(), 3, 77) == a);
}

TEST_CASE("CSV layout") {
  const auto d = Domain::ball(CVec::Zero(1), 2.0);
  const auto rs = index_sweep(d, catalog_weight("gauss", 1), 3, 5);
  const std::string csv = sweep_csv(rs);
  const auto eol = csv.find('\n');
  CHECK(csv.substr(0, eol) ==
        "sample_id,L,bound,norm_sq,trunc_err,quad_err,N,converged,class");
  int lines = 0, commas = 0;
  for (char ch : csv) lines += ch == '\n';
  CHECK(lines == 4);
  const std::string row = csv.substr(eol + 1, csv.find('\n', eol + 1) - eol - 1);
  for (char ch : row) commas += ch == ',';
  CHECK(commas == 8);
  CHECK(row.substr(0, 2) == "0,");
  CHECK(row.find("below_one") != std::string::npos);
}

TEST_SUITE_END();
