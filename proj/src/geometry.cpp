#include "l2x/geometry.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <limits>

#include <Eigen/Dense>

namespace l2x {

namespace {

std::atomic<double> g_volume_fault{1.0};

double factorial(int k) {
  double f = 1.0;
  for (int i = 2; i <= k; ++i) f *= i;
  return f;
}

std::string complex_str(const cplx& z) {
  char buf[64];
  if (z.imag() == 0.0) {
    std::snprintf(buf, sizeof(buf), "%g", z.real());
  } else {
    std::snprintf(buf, sizeof(buf), "%g%+gi", z.real(), z.imag());
  }
  return buf;
}

}  // namespace

namespace detail {
void set_volume_fault_scale(double s) { g_volume_fault.store(s); }
}  // namespace detail

Domain Domain::ball(CVec c, double radius) {
  if (c.size() < 1) throw DimensionError("ball: empty center");
  if (!(radius > 0.0)) throw Error("ball: radius must be positive");
  Domain d;
  d.shape = DomainShape::ball;
  d.n = static_cast<int>(c.size());
  d.center = std::move(c);
  d.radius = radius;
  return d;
}

Domain Domain::polydisc(CVec c, RVec radii) {
  if (c.size() < 1) throw DimensionError("polydisc: empty center");
  if (radii.size() != c.size())
    throw DimensionError("polydisc: center and radii lengths differ");
  for (int j = 0; j < radii.size(); ++j)
    if (!(radii[j] > 0.0)) throw Error("polydisc: radii must be positive");
  Domain d;
  d.shape = DomainShape::polydisc;
  d.n = static_cast<int>(c.size());
  d.center = std::move(c);
  d.radii = std::move(radii);
  return d;
}

Domain Domain::box(std::vector<std::pair<double, double>> intervals) {
  if (intervals.empty() || intervals.size() % 2 != 0)
    throw DimensionError("box: need two intervals per complex coordinate");
  for (const auto& [lo, hi] : intervals)
    if (!(lo < hi)) throw Error("box: each interval needs lo < hi");
  Domain d;
  d.shape = DomainShape::box;
  d.n = static_cast<int>(intervals.size() / 2);
  d.center = CVec(d.n);
  for (int j = 0; j < d.n; ++j) {
    d.center[j] = cplx(0.5 * (intervals[2 * j].first + intervals[2 * j].second),
                       0.5 * (intervals[2 * j + 1].first + intervals[2 * j + 1].second));
  }
  d.intervals = std::move(intervals);
  return d;
}

bool Domain::contains_point(const CVec& z) const {
  return boundary_gap(z) > 0.0;
}

double Domain::boundary_gap(const CVec& z) const {
  if (z.size() != n) throw DimensionError("boundary_gap: dimension mismatch");
  switch (shape) {
    case DomainShape::ball:
      return radius - (z - center).norm();
    case DomainShape::polydisc: {
      double gap = std::numeric_limits<double>::infinity();
      for (int j = 0; j < n; ++j)
        gap = std::min(gap, radii[j] - std::abs(z[j] - center[j]));
      return gap;
    }
    case DomainShape::box: {
      double gap = std::numeric_limits<double>::infinity();
      for (int j = 0; j < n; ++j) {
        const auto& re = intervals[2 * j];
        const auto& im = intervals[2 * j + 1];
        gap = std::min({gap, z[j].real() - re.first, re.second - z[j].real(),
                        z[j].imag() - im.first, im.second - z[j].imag()});
      }
      // The gap above is per real coordinate; a Euclidean ball of that
      // radius around z still fits, so it is a valid lower bound.
      return gap;
    }
  }
  return 0.0;
}

CVec Domain::sample_interior(Rng& rng, double shrink) const {
  CVec z(n);
  switch (shape) {
    case DomainShape::ball: {
      // Rejection from the bounding polydisc keeps the conversion explicit.
      const double R = radius * shrink;
      for (int tries = 0; tries < 4096; ++tries) {
        for (int j = 0; j < n; ++j)
          z[j] = center[j] + cplx(rng.uniform(-R, R), rng.uniform(-R, R));
        if ((z - center).norm() < R) return z;
      }
      throw Error("sample_interior: rejection failed");
    }
    case DomainShape::polydisc: {
      for (int j = 0; j < n; ++j) {
        const double R = radii[j] * shrink;
        for (int tries = 0;; ++tries) {
          cplx w(rng.uniform(-R, R), rng.uniform(-R, R));
          if (std::abs(w) < R) {
            z[j] = center[j] + w;
            break;
          }
          if (tries > 4096) throw Error("sample_interior: rejection failed");
        }
      }
      return z;
    }
    case DomainShape::box: {
      for (int j = 0; j < n; ++j) {
        const auto& re = intervals[2 * j];
        const auto& im = intervals[2 * j + 1];
        const double hre = 0.5 * (re.second - re.first) * shrink;
        const double him = 0.5 * (im.second - im.first) * shrink;
        z[j] = center[j] + cplx(rng.uniform(-hre, hre), rng.uniform(-him, him));
      }
      return z;
    }
  }
  throw Error("sample_interior: bad shape");
}

std::string Domain::describe() const {
  std::string out;
  switch (shape) {
    case DomainShape::ball: {
      out = "ball:";
      for (int j = 0; j < n; ++j) out += (j ? "," : "") + complex_str(center[j]);
      char buf[32];
      std::snprintf(buf, sizeof(buf), ":%g", radius);
      out += buf;
      return out;
    }
    case DomainShape::polydisc: {
      out = "polydisc:";
      for (int j = 0; j < n; ++j) out += (j ? "," : "") + complex_str(center[j]);
      out += ":";
      for (int j = 0; j < n; ++j) {
        char buf[32];
        std::snprintf(buf, sizeof(buf), "%s%g", j ? "," : "", radii[j]);
        out += buf;
      }
      return out;
    }
    case DomainShape::box: {
      out = "box:";
      for (std::size_t k = 0; k < intervals.size(); ++k) {
        char buf[64];
        std::snprintf(buf, sizeof(buf), "%s%g,%g", k ? ";" : "",
                      intervals[k].first, intervals[k].second);
        out += buf;
      }
      return out;
    }
  }
  return out;
}

Unitary::Unitary(CMat m) : a(std::move(m)) {
  if (a.rows() != a.cols() || a.rows() < 1)
    throw DimensionError("Unitary: matrix must be square");
  if (defect() > 1e-12)
    throw Error("Unitary: A^H A deviates from the identity by more than 1e-12");
}

Unitary Unitary::identity(int n) {
  Unitary u;
  u.a = CMat::Identity(n, n);
  return u;
}

Unitary Unitary::swap2(int n) {
  if (n < 2) throw DimensionError("swap2: needs n >= 2");
  Unitary u;
  u.a = CMat::Identity(n, n);
  u.a(0, 0) = u.a(1, 1) = 0.0;
  u.a(0, 1) = u.a(1, 0) = 1.0;
  return u;
}

double Unitary::defect() const {
  const int n = static_cast<int>(a.rows());
  return (a.adjoint() * a - CMat::Identity(n, n)).cwiseAbs().maxCoeff();
}

Unitary haar_unitary(int n, Rng& rng) {
  for (int attempt = 0; attempt < 16; ++attempt) {
    CMat g(n, n);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) g(i, j) = rng.complex_normal();
    Eigen::HouseholderQR<CMat> qr(g);
    CMat q = qr.householderQ();
    CMat r = qr.matrixQR().triangularView<Eigen::Upper>();
    bool ok = true;
    for (int j = 0; j < n; ++j) {
      const double m = std::abs(r(j, j));
      if (m < 1e-300) {
        ok = false;
        break;
      }
      q.col(j) *= r(j, j) / m;
    }
    if (!ok) continue;
    return Unitary(std::move(q));
  }
  throw Error("haar_unitary: degenerate draw");
}

Cylinder make_cylinder(CVec center, double r, double s) {
  const int n = static_cast<int>(center.size());
  return make_cylinder(std::move(center), r, s, Unitary::identity(n));
}

Cylinder make_cylinder(CVec center, double r, double s, Unitary frame) {
  if (center.size() < 1) throw DimensionError("make_cylinder: empty center");
  if (frame.n() != static_cast<int>(center.size()))
    throw DimensionError("make_cylinder: frame does not match center");
  Cylinder c;
  c.center = std::move(center);
  c.r = r;
  c.s = s;
  c.frame = std::move(frame);
  return c;
}

double volume(const Cylinder& c) {
  const int n = c.n();
  if (n < 1) throw DimensionError("volume: empty cylinder");
  if (!(c.r > 0.0)) throw Error("volume: r must be positive");
  double v = kPi * c.r * c.r;
  if (n > 1) {
    if (!(c.s > 0.0)) throw Error("volume: s must be positive for n > 1");
    const int m = n - 1;
    v *= std::pow(kPi, m) * std::pow(c.s, 2 * m) / factorial(m);
  }
  return v * g_volume_fault.load();
}

bool contains(const Domain& d, const Cylinder& c) {
  if (c.n() != d.n) throw DimensionError("contains: dimension mismatch");
  // Every point of the cylinder lies within rho of its center, where
  // rho^2 = r^2 + s^2 (just r for n = 1); the frame does not matter.
  const double rho = c.n() == 1 ? c.r : std::sqrt(c.r * c.r + c.s * c.s);
  return d.boundary_gap(c.center) > rho;
}

Cylinder sample_cylinder(const Domain& d, std::uint64_t seed,
                         const SizePolicy& policy) {
  Rng rng(substream(seed, 0x5a5a5a5aULL));
  for (int attempt = 0; attempt < policy.max_tries; ++attempt) {
    Cylinder c;
    c.center = d.sample_interior(rng, policy.center_shrink);
    const double gap = d.boundary_gap(c.center);
    double rho = std::min(rng.uniform(policy.frac_lo, policy.frac_hi) * gap,
                          policy.rho_cap);
    if (rho < policy.min_rho) continue;
    if (d.n == 1) {
      c.r = rho;
      c.s = 0.0;
      c.frame = Unitary::identity(1);
    } else {
      const double t =
          rng.uniform(policy.aspect_lo, policy.aspect_hi) * 0.5 * kPi;
      c.r = rho * std::cos(t);
      c.s = rho * std::sin(t);
      c.frame = haar_unitary(d.n, rng);
    }
    if (contains(d, c)) return c;
  }
  throw Error("sample_cylinder: no admissible cylinder found");
}

}  // namespace l2x
