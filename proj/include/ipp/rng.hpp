#pragma once

#include <cmath>
#include <cstdint>
#include <random>

namespace ipp {

/// Deterministic RNG used everywhere randomness is needed.
/// Distributions are hand-rolled so that streams are reproducible across
/// standard library implementations.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next_u64() { return engine_(); }

  /// Uniform double in [0, 1).
  double uniform() {
    return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
  }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  /// Uniform integer in [0, n).
  std::uint64_t uniform_index(std::uint64_t n) {
    // modulo bias is negligible for the small n used here
    return engine_() % n;
  }

  /// Standard normal via Box-Muller (second value discarded).
  double normal() {
    double u1 = uniform();
    while (u1 <= 0.0) u1 = uniform();
    const double u2 = uniform();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * M_PI * u2);
  }

  double normal(double mean, double std) { return mean + std * normal(); }

 private:
  std::mt19937_64 engine_;
};

}  // namespace ipp
