#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>
#include <random>

#include "sfm/errors.hpp"

namespace sfm {

// Seeded random source with hand-rolled distributions.  The standard library
// fixes the engine (mt19937_64) but not the distribution algorithms, so
// uniform/normal draws would differ across standard libraries; instance
// generators must be bit-reproducible everywhere, hence these.
class Rng {
public:
  explicit Rng(uint64_t seed) : eng_(seed) {}

  uint64_t next_u64() { return eng_(); }

  // Uniform on [0, 1) with 53 random bits.
  double uniform() { return static_cast<double>(eng_() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  // Uniform integer in [lo, hi], rejection-sampled to avoid modulo bias.
  int uniform_int(int lo, int hi) {
    if (lo > hi) throw PreconditionViolated("uniform_int: empty range");
    uint64_t span = static_cast<uint64_t>(hi) - static_cast<uint64_t>(lo) + 1;
    uint64_t limit = ~uint64_t{0} - ~uint64_t{0} % span;
    uint64_t r;
    do {
      r = eng_();
    } while (r >= limit);
    return lo + static_cast<int>(r % span);
  }

  // Standard normal via Box-Muller (polar-free form, deterministic draw order).
  double normal() {
    if (have_spare_) {
      have_spare_ = false;
      return spare_;
    }
    double u1, u2;
    do {
      u1 = uniform();
    } while (u1 <= 0.0);
    u2 = uniform();
    double r = std::sqrt(-2.0 * std::log(u1));
    double a = 2.0 * std::numbers::pi * u2;
    spare_ = r * std::sin(a);
    have_spare_ = true;
    return r * std::cos(a);
  }

  double normal(double mean, double stddev) { return mean + stddev * normal(); }

private:
  std::mt19937_64 eng_;
  bool have_spare_ = false;
  double spare_ = 0.0;
};

} // namespace sfm
