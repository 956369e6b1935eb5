#pragma once

#include <cstdint>

#include "cubelab/common.hpp"

namespace cubelab {

/// SplitMix64 (Steele, Lea & Flood 2014). Each call advances
///
///   state <- state + 0x9E3779B97F4A7C15
///   z     <- state
///   z     <- (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9
///   z     <- (z ^ (z >> 27)) * 0x94D049BB133111EB
///   out   <- z ^ (z >> 31)
///
/// This generator is the single source of randomness in the library: the
/// doubling-map bit stream, randomized start points, per-trial seeds and
/// random test data are all drawn from it.
class SplitMix64 {
 public:
  static constexpr std::uint64_t kGamma = 0x9E3779B97F4A7C15ULL;

  explicit constexpr SplitMix64(std::uint64_t seed) noexcept : state_(seed) {}

  constexpr std::uint64_t next() noexcept { return mix(state_ += kGamma); }

  /// Word `index` of the stream without advancing (index 0 is the first
  /// value next() would return).
  constexpr std::uint64_t at(std::uint64_t index) const noexcept {
    return mix(state_ + (index + 1) * kGamma);
  }

  /// Uniform double in [0, 1) from the top 53 bits.
  double uniform() noexcept { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

  /// Uniform double in [lo, hi).
  double uniform(double lo, double hi) noexcept { return lo + (hi - lo) * uniform(); }

  /// Real and imaginary parts independently uniform in [-1, 1).
  cplx complex_uniform() noexcept {
    const double re = uniform(-1.0, 1.0);
    return {re, uniform(-1.0, 1.0)};
  }

  static constexpr std::uint64_t mix(std::uint64_t z) noexcept {
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
  }

 private:
  std::uint64_t state_;
};

/// Seed of randomized trial `trial` under `master`: word `trial` of the
/// SplitMix64 stream seeded with `master`. Trial i can be regenerated
/// without replaying trials 0..i-1.
constexpr std::uint64_t trial_seed(std::uint64_t master, std::uint64_t trial) noexcept {
  return SplitMix64(master).at(trial);
}

}  // namespace cubelab
