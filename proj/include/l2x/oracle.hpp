#pragma once

#include <cstdint>
#include <functional>

#include "l2x/common.hpp"
#include "l2x/geometry.hpp"
#include "l2x/poly.hpp"

namespace l2x {

// Independent reference computations, deliberately built on different
// machinery than the main pipeline: adaptive Simpson instead of
// Gauss-Legendre, plain Monte Carlo instead of tensor rules, and a
// separate random stream.
namespace oracle {

// Extension index of a radial weight phi(z) = p(|z|) on the disc of
// radius r about 0 (n = 1). For radial weights the minimizer is f = 1,
// so L = 2 pi Int_0^r t e^{-p(t)} dt / (pi r^2 e^{-p(0)}).
double radial_index(const std::function<double(double)>& p, double r,
                    double tol = 1e-12);

// Adaptive Simpson quadrature on [a, b].
double simpson(const std::function<double(double)>& f, double a, double b,
               double tol = 1e-12, int max_depth = 40);

struct MCResult {
  cplx value{0.0, 0.0};
  double ci99 = 0.0;       // 99% confidence half-width on |value|
  std::size_t samples = 0;
  double efficiency = 0.0;  // acceptance rate of the rejection sampler
};

// Monte Carlo integral of f over the cylinder, by rejection sampling from
// the bounding box of the standard cylinder. Throws when the acceptance
// rate falls below 1%.
MCResult mc_integral(const Cylinder& c, const std::function<cplx(const CVec&)>& f,
                     std::size_t samples, std::uint64_t seed);

// The closed-form minimizer for a weight 2 Re h with polynomial h:
// f(z) = exp(h(z) - h(a)).
std::function<cplx(const CVec&)> pluriharmonic_extremal(const Poly& h,
                                                        const Cylinder& c);

}  // namespace oracle
}  // namespace l2x
