#pragma once

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>

#include "l2x/common.hpp"
#include "l2x/geometry.hpp"

namespace testutil {

struct CliResult {
  int status = -1;
  std::string output;  // stdout and stderr combined
};

// Runs the CLI with the given arguments, capturing output. L2EXT_BIN is
// injected by the build.
inline CliResult run_cli(const std::string& args) {
  static int counter = 0;
  const std::string tmp =
      "cli_out_" + std::to_string(counter++) + ".txt";
  const std::string cmd =
      std::string(L2EXT_BIN) + " " + args + " > " + tmp + " 2>&1";
  const int rc = std::system(cmd.c_str());
  CliResult res;
  res.status = rc == -1 ? -1 : WEXITSTATUS(rc);
  std::ifstream f(tmp);
  std::stringstream ss;
  ss << f.rdbuf();
  res.output = ss.str();
  std::remove(tmp.c_str());
  return res;
}

inline std::string read_file(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  std::stringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

inline l2x::CVec cpoint(std::initializer_list<l2x::cplx> vals) {
  l2x::CVec v(static_cast<Eigen::Index>(vals.size()));
  Eigen::Index i = 0;
  for (const auto& x : vals) v[i++] = x;
  return v;
}

}  // namespace testutil
