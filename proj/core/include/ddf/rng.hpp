#pragma once

#include <cstdint>
#include <random>

#include "ddf/params.hpp"

namespace ddf {

using Rng = std::mt19937_64;

/// Keyed 64-bit mixer (splitmix64 finaliser chained over the key words).
std::uint64_t mix_key(std::uint64_t seed, std::uint64_t a, std::uint64_t b = 0,
                      std::uint64_t c = 0);

/// Independent generator for work item (stream, index) under a master seed.
/// The stream never depends on which worker evaluates the item.
inline Rng substream(std::uint64_t seed, std::uint64_t stream, std::uint64_t index) {
  return Rng(mix_key(seed, stream, index));
}

/// Circularly-symmetric complex Gaussian with E|z|^2 = variance.
inline Complex complex_normal(Rng& rng, double variance) {
  if (variance == 0.0) return {};
  std::normal_distribution<double> n(0.0, std::sqrt(variance / 2.0));
  const double re = n(rng);
  const double im = n(rng);
  return {re, im};
}

inline double uniform01(Rng& rng) {
  return std::uniform_real_distribution<double>(0.0, 1.0)(rng);
}

}  // namespace ddf
