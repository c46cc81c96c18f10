#pragma once

#include <array>
#include <cstdint>

namespace zubov {

/// SplitMix64 (Steele/Lea/Flood). Seeds the main generator and derives
/// independent sub-seeds.
class SplitMix64 {
 public:
  explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next() {
    std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ULL);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
  }

 private:
  std::uint64_t state_;
};

/// xoshiro256++ 1.0 (Blackman/Vigna). The state is filled from SplitMix64;
/// `stream` applies that many jumps, each advancing 2^128 steps, so streams
/// never overlap. Identical (seed, stream) reproduces the same sequence on
/// every platform; this generator is part of the reproducibility contract.
class Xoshiro256PlusPlus {
 public:
  explicit Xoshiro256PlusPlus(std::uint64_t seed, std::uint64_t stream = 0) {
    SplitMix64 sm(seed);
    for (auto& word : state_) word = sm.next();
    for (std::uint64_t i = 0; i < stream; ++i) jump();
  }

  std::uint64_t next() {
    const std::uint64_t result = rotl(state_[0] + state_[3], 23) + state_[0];
    const std::uint64_t t = state_[1] << 17;
    state_[2] ^= state_[0];
    state_[3] ^= state_[1];
    state_[1] ^= state_[2];
    state_[0] ^= state_[3];
    state_[2] ^= t;
    state_[3] = rotl(state_[3], 45);
    return result;
  }

  /// Uniform in [0, 1) with 53-bit resolution.
  double uniform01() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

  /// Uniform in the open interval (0, 1); both endpoints unreachable.
  double uniform_open01() {
    return (static_cast<double>(next() >> 11) + 0.5) * 0x1.0p-53;
  }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

  double uniform_open(double lo, double hi) {
    return lo + (hi - lo) * uniform_open01();
  }

  /// Advance 2^128 steps (Vigna's published jump polynomial).
  void jump() {
    static constexpr std::array<std::uint64_t, 4> kJump = {
        0x180EC6D33CFD0ABAULL, 0xD5A61266F0C9392CULL,
        0xA9582618E03FC9AAULL, 0x39ABDC4529B1661CULL};
    std::array<std::uint64_t, 4> acc{};
    for (std::uint64_t word : kJump) {
      for (int b = 0; b < 64; ++b) {
        if (word & (1ULL << b)) {
          for (int i = 0; i < 4; ++i) acc[i] ^= state_[i];
        }
        next();
      }
    }
    state_ = acc;
  }

 private:
  static std::uint64_t rotl(std::uint64_t x, int k) {
    return (x << k) | (x >> (64 - k));
  }

  std::array<std::uint64_t, 4> state_{};
};

/// Derives an independent seed for a (purpose, index) pair, e.g. one sampling
/// stream per point kind per training iteration.
inline std::uint64_t derive_seed(std::uint64_t base, std::uint64_t purpose,
                                 std::uint64_t index) {
  SplitMix64 outer(base);
  const std::uint64_t mixed = outer.next() ^ (purpose * 0xA0761D6478BD642FULL) ^
                              (index * 0xE7037ED1A0B428DBULL);
  SplitMix64 inner(mixed);
  return inner.next();
}

}  // namespace zubov
