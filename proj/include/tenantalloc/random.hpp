#pragma once

// SplitMix64 (Steele, Lea, Flood 2014) and the two derived draws the library
// uses. Everything here is fixed-width integer arithmetic so other
// implementations can reproduce generated instances and permutations bit for
// bit:
//
//   next():      state += 0x9E3779B97F4A7C15;
//                z = state;
//                z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9;
//                z = (z ^ (z >> 27)) * 0x94D049BB133111EB;
//                return z ^ (z >> 31);
//   below(k):    (next() * k) >> 64, computed in 128 bits; k > 0.
//   bernoulli(p): (next() >> 11) * 2^-53 < p.

#include <cstdint>

namespace tenantalloc {

class SplitMix64 {
 public:
  explicit SplitMix64(std::uint64_t seed) noexcept : state_(seed) {}

  std::uint64_t next() noexcept {
    std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ULL);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
  }

  /// Uniform-ish integer in [0, k). k must be positive.
  std::uint64_t below(std::uint64_t k) noexcept {
    return static_cast<std::uint64_t>((static_cast<unsigned __int128>(next()) * k) >> 64);
  }

  /// Unit double in [0, 1) with 53 random bits.
  double unit() noexcept { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

  bool bernoulli(double p) noexcept { return unit() < p; }

 private:
  std::uint64_t state_;
};

}  // namespace tenantalloc
