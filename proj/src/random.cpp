#include "temprisk/random.hpp"

#include <cmath>
#include <numbers>

#include "temprisk/error.hpp"

namespace temprisk {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

Rng::Rng(std::uint64_t seed, std::uint64_t index, std::uint64_t stream)
    : engine_(splitmix64(splitmix64(splitmix64(seed) ^ index) ^ (stream * 0xD1B54A32D192ED03ULL))) {}

std::int64_t Rng::uniform_int(std::int64_t lo, std::int64_t hi) {
  if (hi < lo) throw ValidationError("uniform_int: empty range");
  const std::uint64_t span = static_cast<std::uint64_t>(hi) - static_cast<std::uint64_t>(lo);
  if (span == ~0ULL) return static_cast<std::int64_t>(next());
  const std::uint64_t range = span + 1;
  const std::uint64_t limit = ~0ULL - (~0ULL % range + 1) % range;
  std::uint64_t v;
  do {
    v = next();
  } while (v > limit);
  return lo + static_cast<std::int64_t>(v % range);
}

double Rng::uniform01() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

double Rng::normal() {
  double u1;
  do {
    u1 = uniform01();
  } while (u1 <= 0.0);
  const double u2 = uniform01();
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

std::int64_t Rng::poisson(double lambda) {
  if (!(lambda > 0.0)) throw ValidationError("poisson rate must be positive");
  if (lambda >= 30.0) {
    const double v = std::round(lambda + std::sqrt(lambda) * normal());
    return v < 0.0 ? 0 : static_cast<std::int64_t>(v);
  }
  const double limit = std::exp(-lambda);
  std::int64_t k = 0;
  double p = uniform01();
  while (p > limit) {
    ++k;
    p *= uniform01();
  }
  return k;
}

}  // namespace temprisk
