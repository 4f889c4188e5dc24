#pragma once

#include <string>
#include <vector>

#include "l2x/classify.hpp"
#include "l2x/extension_index.hpp"
#include "l2x/jsonfmt.hpp"

namespace l2x {

// Stable JSON/CSV emission. Field order is fixed and floats use one
// format, so identical results serialize to identical bytes.

void write_cylinder(JsonWriter& w, const Cylinder& c);
void write_index_result(JsonWriter& w, const IndexResult& r, bool with_coeffs,
                        double tol_floor = 1e-4);

std::string index_result_json(const IndexResult& r, const std::string& weight,
                              const std::string& domain, bool with_coeffs);

std::string classify_json(const ClassifyOutcome& out, const std::string& weight,
                          const std::string& domain, int samples,
                          std::uint64_t seed);

// Columns: sample_id, L, bound, norm_sq, trunc_err, quad_err, N,
// converged, class.
std::string sweep_csv(const std::vector<IndexResult>& results,
                      double tol_floor = 1e-4);

}  // namespace l2x
