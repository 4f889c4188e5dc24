#pragma once

#include <functional>
#include <string>
#include <vector>

namespace l2x {

struct CheckResult {
  std::string name;
  bool pass = false;
  std::string detail;
  double seconds = 0.0;
};

// End-to-end consistency checks over the whole pipeline. `quick` trims
// sample counts and skips the slowest dimension-2 cases. `on_result` is
// called after each check, for streaming output.
std::vector<CheckResult> run_selftest(
    bool quick, const std::function<void(const CheckResult&)>& on_result = {});

}  // namespace l2x
