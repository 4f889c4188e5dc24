#pragma once

#include <complex>
#include <stdexcept>
#include <string>

#include <Eigen/Core>

namespace l2x {

using cplx = std::complex<double>;
using CVec = Eigen::VectorXcd;
using CMat = Eigen::MatrixXcd;
using RVec = Eigen::VectorXd;

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct DimensionError : Error {
  using Error::Error;
};

struct QuadratureError : Error {
  using Error::Error;
};

struct SolveError : Error {
  using Error::Error;
};

inline constexpr double kPi = 3.14159265358979323846;

}  // namespace l2x
