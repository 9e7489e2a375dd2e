#pragma once

#include <cstdint>

namespace hdfd {

// Counter-based uniform stream (splitmix64). The value at position c of a
// stream seeded with s is a pure function of (s, c), so any worker that knows
// the seed can regenerate any sample without replaying the stream. This is
// what makes Monte Carlo results independent of how work is chunked.

inline constexpr std::uint64_t kSplitMix64Gamma = 0x9e3779b97f4a7c15ULL;

inline std::uint64_t splitmix64_mix(std::uint64_t z) {
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

inline std::uint64_t splitmix64_at(std::uint64_t seed, std::uint64_t counter) {
  return splitmix64_mix(seed + (counter + 1) * kSplitMix64Gamma);
}

// 53-bit mantissa in [0, 1)
inline double to_unit_double(std::uint64_t bits) {
  return static_cast<double>(bits >> 11) * 0x1.0p-53;
}

class SplitMix64 {
 public:
  explicit SplitMix64(std::uint64_t seed, std::uint64_t counter = 0)
      : seed_(seed), counter_(counter) {}

  std::uint64_t next_u64() { return splitmix64_at(seed_, counter_++); }
  double next_unit() { return to_unit_double(next_u64()); }

  std::uint64_t seed() const { return seed_; }
  std::uint64_t counter() const { return counter_; }

  // Decorrelated sub-stream seed, e.g. one per sweep row. The XOR constant
  // keeps derived seeds off the root stream's own counter sequence.
  static std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t index) {
    return splitmix64_at(seed ^ 0x0a02bdbf7bb3c0a7ULL, index);
  }

  static constexpr const char* name() { return "splitmix64"; }

 private:
  std::uint64_t seed_;
  std::uint64_t counter_;
};

}  // namespace hdfd
