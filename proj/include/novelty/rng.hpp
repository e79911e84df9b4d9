#pragma once

#include <cstdint>

namespace novelty {

/**
 * SplitMix64 (Steele, Lea, Flood 2014): state advances by the golden-gamma
 * constant, output is the murmur-style finalizer. Used for seeding and for
 * per-replication seed derivation so that independent streams never depend
 * on iteration order.
 */
struct SplitMix64 {
  std::uint64_t state;

  std::uint64_t next() {
    std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }
};

/// Per-replication seed: one SplitMix64 step from base ^ ((index+1) * gamma).
inline std::uint64_t mix_seed(std::uint64_t base, std::uint64_t index) {
  SplitMix64 sm{base ^ ((index + 1) * 0x9e3779b97f4a7c15ULL)};
  return sm.next();
}

/**
 * xoshiro256** (Blackman, Vigna 2018), the reference algorithm verbatim;
 * state is filled with four SplitMix64 outputs from the seed. Platform
 * independent: identical streams for identical seeds everywhere.
 */
class Xoshiro256StarStar {
 public:
  explicit Xoshiro256StarStar(std::uint64_t seed) {
    SplitMix64 sm{seed};
    for (auto& word : s_) word = sm.next();
  }

  std::uint64_t next() {
    const std::uint64_t result = rotl(s_[1] * 5, 7) * 9;
    const std::uint64_t t = s_[1] << 17;
    s_[2] ^= s_[0];
    s_[3] ^= s_[1];
    s_[1] ^= s_[2];
    s_[0] ^= s_[3];
    s_[2] ^= t;
    s_[3] = rotl(s_[3], 45);
    return result;
  }

  /// Uniform double in [0, 1): top 53 bits scaled by 2^-53.
  double uniform01() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

 private:
  static std::uint64_t rotl(std::uint64_t x, int k) {
    return (x << k) | (x >> (64 - k));
  }

  std::uint64_t s_[4];
};

}  // namespace novelty
