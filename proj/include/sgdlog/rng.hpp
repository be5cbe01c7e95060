#pragma once

#include <cstdint>
#include <limits>

#include "sgdlog/bigint.hpp"

namespace sgdlog {

// xoshiro256++ with splitmix64 seeding. Hand-rolled so that sampled streams
// are identical across compilers and standard libraries; std::uniform_*
// distributions make no such guarantee.
class Rng {
 public:
  explicit Rng(uint64_t seed) {
    uint64_t x = seed;
    for (auto& w : state_) w = splitmix64(x);
  }

  uint64_t next_u64() {
    const uint64_t result = rotl(state_[0] + state_[3], 23) + state_[0];
    const uint64_t t = state_[1] << 17;
    state_[2] ^= state_[0];
    state_[3] ^= state_[1];
    state_[1] ^= state_[2];
    state_[0] ^= state_[3];
    state_[2] ^= t;
    state_[3] = rotl(state_[3], 45);
    return result;
  }

  // Uniform integer in [0, bound), bound >= 1. Rejection on the top range
  // keeps the draw exactly uniform.
  uint64_t below(uint64_t bound) {
    const uint64_t threshold = (0 - bound) % bound;
    for (;;) {
      const uint64_t r = next_u64();
      if (r >= threshold) return r % bound;
    }
  }

  // Uniform BigInt in [0, bound), bound >= 1.
  BigInt below_big(const BigInt& bound) {
    if (bound <= std::numeric_limits<uint64_t>::max())
      return BigInt(below(static_cast<uint64_t>(bound)));
    const size_t bits = bit_length(bound);
    const size_t words = (bits + 63) / 64;
    for (;;) {
      BigInt v = 0;
      for (size_t i = 0; i < words; ++i) {
        v <<= 64;
        v |= next_u64();
      }
      v >>= words * 64 - bits;
      if (v < bound) return v;
    }
  }

  // Uniform double in [0, 1).
  double unit() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  bool coin() { return (next_u64() >> 63) != 0; }

  // Decorrelated child seed for parallel trials.
  static uint64_t derive(uint64_t seed, uint64_t stream) {
    uint64_t x = seed ^ (stream * 0x9e3779b97f4a7c15ULL);
    uint64_t a = splitmix64(x);
    uint64_t b = splitmix64(x);
    return a ^ rotl(b, 32);
  }

 private:
  static uint64_t splitmix64(uint64_t& x) {
    uint64_t z = (x += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }
  static uint64_t rotl(uint64_t v, int k) { return (v << k) | (v >> (64 - k)); }

  uint64_t state_[4];
};

}  // namespace sgdlog
