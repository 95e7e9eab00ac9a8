#pragma once

#include <cstdint>
#include <numeric>
#include <vector>

namespace sgdlab {

/// SplitMix64 with an explicit stream-splitting rule.
///
/// stream(seed, k) is the SplitMix64 sequence whose initial internal state is
/// mix(seed ^ mix(k)), where mix is the SplitMix64 finalizer. Identical
/// (seed, k) pairs give identical sequences on every platform, which is what
/// makes epoch schedules replayable.
class SplitMix64 {
public:
  static constexpr uint64_t kGamma = 0x9E3779B97F4A7C15ULL;

  static uint64_t mix(uint64_t z) {
    z += kGamma;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
  }

  static SplitMix64 stream(uint64_t seed, uint64_t k) { return SplitMix64(mix(seed ^ mix(k))); }

  explicit SplitMix64(uint64_t state) : state_(state) {}

  uint64_t next() {
    state_ += kGamma;
    uint64_t z = state_;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
  }

  /// Unbiased draw from {0, ..., bound-1} by rejection below the wrap threshold.
  uint64_t bounded(uint64_t bound) {
    const uint64_t threshold = (0 - bound) % bound;
    for (;;) {
      const uint64_t r = next();
      if (r >= threshold) return r % bound;
    }
  }

  /// Uniform double in [0, 1) using the top 53 bits.
  double uniform01() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

private:
  uint64_t state_;
};

/// Fisher-Yates over {0..n-1}, consuming draws from `g` high-index first.
inline std::vector<int> fisher_yates(int n, SplitMix64& g) {
  std::vector<int> p(n);
  std::iota(p.begin(), p.end(), 0);
  for (int i = n - 1; i >= 1; --i) {
    const int j = static_cast<int>(g.bounded(static_cast<uint64_t>(i) + 1));
    std::swap(p[i], p[j]);
  }
  return p;
}

}  // namespace sgdlab
