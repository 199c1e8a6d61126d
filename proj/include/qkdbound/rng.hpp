#pragma once

#include <cstdint>

namespace qkdbound {

/// Counter-based generator: draw i of substream r is a pure function of
/// (seed, r, i), so chunked or out-of-order evaluation reproduces the same
/// values. Not cryptographic.
class CounterRng {
 public:
  explicit CounterRng(std::uint64_t seed) : seed_(seed) {}

  std::uint64_t bits(std::uint64_t substream, std::uint64_t draw) const {
    const std::uint64_t key = mix(seed_ ^ mix(substream + 0x632BE59BD9B4E019ull));
    return mix(key + draw * 0x9E3779B97F4A7C15ull);
  }

  /// Uniform double in [0, 1).
  double uniform(std::uint64_t substream, std::uint64_t draw) const {
    return static_cast<double>(bits(substream, draw) >> 11) * 0x1.0p-53;
  }

  std::uint64_t seed() const { return seed_; }

 private:
  // splitmix64 finalizer
  static std::uint64_t mix(std::uint64_t z) {
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
  }

  std::uint64_t seed_;
};

}  // namespace qkdbound
