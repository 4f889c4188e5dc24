#pragma once

#include <cmath>
#include <cstdint>
#include <random>

#include "l2x/common.hpp"

namespace l2x {

// Mixing step of splitmix64. Advances the state and returns one word.
inline std::uint64_t splitmix64(std::uint64_t& state) {
  state += 0x9e3779b97f4a7c15ULL;
  std::uint64_t z = state;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

// Derives an independent seed for substream `id` of a master seed, so that
// per-sample streams are reproducible regardless of evaluation order.
inline std::uint64_t substream(std::uint64_t seed, std::uint64_t id) {
  std::uint64_t s = seed ^ (0x9e3779b97f4a7c15ULL * (id + 1));
  std::uint64_t a = splitmix64(s);
  std::uint64_t b = splitmix64(s);
  return a ^ (b << 1);
}

// Deterministic generator: mt19937_64 for the raw stream, with explicit
// conversions to double so results do not depend on the standard library's
// distribution implementations.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : eng_(seed) {}

  std::uint64_t raw() { return eng_(); }

  // Uniform in [0, 1) with 53-bit resolution.
  double uniform() { return static_cast<double>(eng_() >> 11) * 0x1.0p-53; }

  double uniform(double a, double b) { return a + (b - a) * uniform(); }

  // Standard normal via Box-Muller; caches the spare value.
  double normal() {
    if (have_spare_) {
      have_spare_ = false;
      return spare_;
    }
    double u1 = uniform();
    while (u1 <= 0.0) u1 = uniform();
    double u2 = uniform();
    double rad = std::sqrt(-2.0 * std::log(u1));
    double ang = 2.0 * kPi * u2;
    spare_ = rad * std::sin(ang);
    have_spare_ = true;
    return rad * std::cos(ang);
  }

  cplx complex_normal() {
    double re = normal();
    double im = normal();
    return {re, im};
  }

 private:
  std::mt19937_64 eng_;
  double spare_ = 0.0;
  bool have_spare_ = false;
};

// Lightweight generator on an unrelated algorithm, used by the oracle module
// so cross-checks do not share a random stream with the main code paths.
class OracleRng {
 public:
  explicit OracleRng(std::uint64_t seed) : state_(seed ^ 0xd1b54a32d192ed03ULL) {
    splitmix64(state_);
  }

  double uniform() { return static_cast<double>(splitmix64(state_) >> 11) * 0x1.0p-53; }

  double uniform(double a, double b) { return a + (b - a) * uniform(); }

 private:
  std::uint64_t state_;
};

}  // namespace l2x
