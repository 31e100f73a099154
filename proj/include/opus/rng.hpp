#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>
#include <random>

namespace opus {

// Seed-derivation mixer (splitmix64). Used to fan one user seed out into
// independent streams (LSH family, key matrices, clustering, workloads)
// without correlated low bits.
inline std::uint64_t splitmix64(std::uint64_t& state) {
  state += 0x9e3779b97f4a7c15ULL;
  std::uint64_t z = state;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

inline std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream) {
  std::uint64_t s = seed ^ (0xa0761d6478bd642fULL * (stream + 1));
  return splitmix64(s);
}

// Uniform double in [0, 1) from the engine's full 64-bit output. We avoid
// std::uniform_real_distribution for values that feed persisted artifacts:
// mt19937_64 output is pinned by the standard, the distribution adapters
// are not.
inline double uniform01(std::mt19937_64& gen) {
  return static_cast<double>(gen() >> 11) * 0x1.0p-53;
}

// Uniform in [lo, hi).
inline double uniform_in(std::mt19937_64& gen, double lo, double hi) {
  return lo + (hi - lo) * uniform01(gen);
}

// Unbiased integer in [0, n) by rejection.
inline std::uint64_t uniform_below(std::mt19937_64& gen, std::uint64_t n) {
  const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() - std::numeric_limits<std::uint64_t>::max() % n;
  std::uint64_t x;
  do {
    x = gen();
  } while (x >= limit);
  return x % n;
}

// Standard Gaussian via Box-Muller on the pinned uniform stream. One draw
// per call; the sine branch is discarded to keep the stream position a
// simple function of the call count.
inline double gaussian(std::mt19937_64& gen) {
  double u1;
  do {
    u1 = uniform01(gen);
  } while (u1 <= 0.0);
  const double u2 = uniform01(gen);
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

}  // namespace opus
