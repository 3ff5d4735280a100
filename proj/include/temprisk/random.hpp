#pragma once

#include <cstdint>
#include <random>

namespace temprisk {

std::uint64_t splitmix64(std::uint64_t x);

/**
 * Reproducible generator for one (seed, index, stream) triple.
 *
 * All transforms from raw 64-bit words are implemented here so draws do not
 * depend on the standard library's distribution implementations.
 */
class Rng {
 public:
  Rng(std::uint64_t seed, std::uint64_t index, std::uint64_t stream);

  std::uint64_t next() { return engine_(); }

  /// Uniform integer in [lo, hi] by rejection sampling.
  std::int64_t uniform_int(std::int64_t lo, std::int64_t hi);

  /// Uniform double in [0, 1) with 53 random bits.
  double uniform01();

  /// Standard normal via Box-Muller (one value per call, the sine branch is discarded).
  double normal();

  /// Poisson count; Knuth's multiplication method below lambda 30, else rounded normal.
  std::int64_t poisson(double lambda);

 private:
  std::mt19937_64 engine_;
};

}  // namespace temprisk
