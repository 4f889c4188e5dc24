#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "l2x/common.hpp"
#include "l2x/rng.hpp"

namespace l2x {

enum class DomainShape { ball, polydisc, box };

// A bounded pseudoconvex reference domain in C^n. Boxes are products of
// real intervals, two per complex coordinate (real part, then imaginary).
struct Domain {
  DomainShape shape = DomainShape::ball;
  int n = 1;
  CVec center;                                      // ball, polydisc
  double radius = 0.0;                              // ball
  RVec radii;                                       // polydisc
  std::vector<std::pair<double, double>> intervals; // box, size 2n

  static Domain ball(CVec c, double radius);
  static Domain polydisc(CVec c, RVec radii);
  static Domain box(std::vector<std::pair<double, double>> intervals);

  bool contains_point(const CVec& z) const;

  // Lower bound on the Euclidean distance from z to the boundary;
  // nonpositive when z is outside.
  double boundary_gap(const CVec& z) const;

  // Uniform point in the domain scaled toward its center by `shrink`.
  CVec sample_interior(Rng& rng, double shrink = 1.0) const;

  std::string describe() const;
};

// Frame for a cylinder. Construction validates near-unitarity.
struct Unitary {
  CMat a;

  Unitary() = default;
  explicit Unitary(CMat m);

  static Unitary identity(int n);
  // Swaps the first two coordinates; requires n >= 2.
  static Unitary swap2(int n);

  int n() const { return static_cast<int>(a.rows()); }
  double defect() const;  // max-norm of A^H A - I
};

// Draws from the Haar measure on U(n) via QR of a complex Ginibre matrix
// with the phases of R's diagonal divided out.
Unitary haar_unitary(int n, Rng& rng);

// The cylinder a + A(D_r x B_s^{n-1}). For n = 1 the ball factor is empty
// and s is ignored.
struct Cylinder {
  CVec center;
  double r = 0.0;
  double s = 0.0;
  Unitary frame;

  int n() const { return static_cast<int>(center.size()); }
};

// Builds a cylinder with an identity frame unless one is given.
Cylinder make_cylinder(CVec center, double r, double s = 0.0);
Cylinder make_cylinder(CVec center, double r, double s, Unitary frame);

double volume(const Cylinder& c);
bool contains(const Domain& d, const Cylinder& c);

// Controls how sample_cylinder picks sizes relative to the boundary gap.
struct SizePolicy {
  double center_shrink = 0.6;  // centers drawn from the shrunk domain
  double frac_lo = 0.35;       // total radius as a fraction of the gap
  double frac_hi = 0.85;
  double rho_cap = 0.6;        // absolute cap on sqrt(r^2 + s^2)
  double aspect_lo = 0.25;     // r/s mix, as a fraction of a quarter turn
  double aspect_hi = 0.75;
  double min_rho = 1e-3;
  int max_tries = 64;
};

// Deterministic in (d, seed, policy). Returned cylinders satisfy
// contains(d, c); throws after max_tries failures.
Cylinder sample_cylinder(const Domain& d, std::uint64_t seed,
                         const SizePolicy& policy = {});

namespace detail {
// Test hook: scales the value returned by volume(). The self test uses it
// as a negative control to prove its checks can fail.
void set_volume_fault_scale(double s);
}  // namespace detail

}  // namespace l2x
