#pragma once

#include <cstdint>
#include <random>
#include <string_view>

namespace heteng {

/// Deterministic, platform-independent uniform draws. std::mt19937_64 is
/// fully specified by the standard; the distributions are not, so all
/// uniform sampling goes through the helpers below instead of
/// std::uniform_real_distribution.
using Rng = std::mt19937_64;

/// SplitMix64 finalizer, used to decorrelate derived seeds.
inline std::uint64_t mix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ull;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
  return x ^ (x >> 31);
}

/// FNV-1a, for folding stream labels (e.g. an algorithm name) into a seed.
inline std::uint64_t hash_label(std::string_view label) {
  std::uint64_t h = 0xcbf29ce484222325ull;
  for (unsigned char c : label) {
    h ^= c;
    h *= 0x100000001b3ull;
  }
  return h;
}

/// Derives an independent seed for (base, run, stream). Placement and
/// energy-init streams depend only on (base, run) so that every algorithm
/// sees the same network; election streams additionally fold in the
/// algorithm label.
inline std::uint64_t derive_seed(std::uint64_t base, std::uint64_t run,
                                 std::uint64_t stream) {
  return mix64(mix64(base + 0x51ed2700u + run) ^ mix64(stream));
}

namespace seed_stream {
inline constexpr std::uint64_t placement = 0xA11CE;
inline constexpr std::uint64_t energy_init = 0xE4E26;
inline constexpr std::uint64_t election = 0xE1EC7;
}  // namespace seed_stream

/// Uniform double in [0, 1), 53-bit resolution.
inline double uniform_double(Rng& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

/// Uniform double in [lo, hi).
inline double uniform_range(Rng& rng, double lo, double hi) {
  return lo + uniform_double(rng) * (hi - lo);
}

/// Uniform integer in [0, n), n >= 1. Uses rejection to stay unbiased.
inline std::uint64_t uniform_index(Rng& rng, std::uint64_t n) {
  const std::uint64_t limit = ~std::uint64_t{0} - ~std::uint64_t{0} % n;
  std::uint64_t x = rng();
  while (x >= limit) x = rng();
  return x % n;
}

}  // namespace heteng
