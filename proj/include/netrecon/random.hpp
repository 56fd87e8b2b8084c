#pragma once

#include <cstddef>
#include <cstdint>
#include <random>
#include <string_view>

namespace netrecon {

using Rng = std::mt19937_64;

/// Stable 64-bit seed for one stage of one sweep point and repetition.
/// Depends only on its arguments, never on execution order.
std::uint64_t derive_seed(std::uint64_t master, std::string_view stage, std::string_view key,
                          std::uint64_t repetition);

/// Uniform integer in [0, n). n must be positive.
inline std::size_t uniform_index(Rng& rng, std::size_t n) {
  return std::uniform_int_distribution<std::size_t>(0, n - 1)(rng);
}

inline double uniform01(Rng& rng) { return std::uniform_real_distribution<double>(0.0, 1.0)(rng); }

inline bool bernoulli(Rng& rng, double p) {
  if (p >= 1.0) return true;
  if (p <= 0.0) return false;
  return uniform01(rng) < p;
}

}  // namespace netrecon
