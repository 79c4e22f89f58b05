#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>
#include <string_view>
#include <vector>

#include "wsndct/error.hpp"

namespace wsndct {

// Deterministic 64-bit generator, stream id "wsndct-sm64-v1".
//
// The core stream is splitmix64 (Weyl increment + avalanche mix). Independent
// child streams are derived as
//
//   child_seed = mix(mix(parent_seed ^ fnv1a64(tag)) + (index + 1) * GAMMA)
//
// so every module can carve out its own reproducible stream from a master
// seed. The construction is frozen: golden outputs depend on it.
class Rng {
 public:
  static constexpr std::string_view kStreamId = "wsndct-sm64-v1";

  explicit Rng(std::uint64_t seed) : seed_(seed), state_(seed) {}

  std::uint64_t seed() const { return seed_; }

  std::uint64_t next_u64() { return mix(state_ += kGamma); }

  // Uniform in [0, 1), 53-bit resolution.
  double next_double() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * next_double(); }

  // Unbiased integer in [0, n) via rejection sampling.
  std::uint64_t below(std::uint64_t n) {
    if (n == 0) throw InvalidArgumentError("Rng::below: bound must be positive");
    const std::uint64_t threshold = (0 - n) % n;
    for (;;) {
      const std::uint64_t r = next_u64();
      if (r >= threshold) return r % n;
    }
  }

  // Standard normal via Box-Muller; consumes two draws per sample.
  double normal() {
    const double u1 = (static_cast<double>(next_u64() >> 11) + 1.0) * 0x1.0p-53;  // (0, 1]
    const double u2 = next_double();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
  }

  static std::uint64_t derive(std::uint64_t parent_seed, std::string_view tag,
                              std::uint64_t index) {
    return mix(mix(parent_seed ^ fnv1a64(tag)) + (index + 1) * kGamma);
  }

  Rng child(std::string_view tag, std::uint64_t index) const {
    return Rng(derive(seed_, tag, index));
  }

 private:
  static constexpr std::uint64_t kGamma = 0x9E3779B97F4A7C15ull;

  static constexpr std::uint64_t mix(std::uint64_t z) {
    z ^= z >> 30;
    z *= 0xBF58476D1CE4E5B9ull;
    z ^= z >> 27;
    z *= 0x94D049BB133111EBull;
    z ^= z >> 31;
    return z;
  }

  static constexpr std::uint64_t fnv1a64(std::string_view s) {
    std::uint64_t h = 0xCBF29CE484222325ull;
    for (const char c : s) {
      h ^= static_cast<unsigned char>(c);
      h *= 0x100000001B3ull;
    }
    return h;
  }

  std::uint64_t seed_;
  std::uint64_t state_;
};

// First k entries of a Fisher-Yates shuffle of 0..n-1; distinct by construction.
inline std::vector<std::size_t> sample_without_replacement(std::size_t n, std::size_t k,
                                                           Rng& rng) {
  if (k > n) throw InvalidArgumentError("sample_without_replacement: k exceeds n");
  std::vector<std::size_t> ids(n);
  for (std::size_t i = 0; i < n; ++i) ids[i] = i;
  for (std::size_t i = 0; i < k; ++i) {
    const std::size_t j = i + static_cast<std::size_t>(rng.below(n - i));
    std::swap(ids[i], ids[j]);
  }
  ids.resize(k);
  return ids;
}

}  // namespace wsndct
