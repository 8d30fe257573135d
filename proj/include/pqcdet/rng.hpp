#pragma once

#include <cstdint>
#include <string>

namespace pqcdet {

// splitmix64 (Steele, Lea, Flood): used both as a standalone stream and to
// expand seeds into xoshiro256** state.
struct SplitMix64 {
  std::uint64_t state;
  explicit SplitMix64(std::uint64_t seed) : state(seed) {}
  std::uint64_t next() {
    std::uint64_t z = (state += 0x9E3779B97F4A7C15ULL);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
  }
};

// xoshiro256** 1.0 (Blackman, Vigna). Substream i of a master seed is the
// generator whose state is expanded by splitmix64 from seed ^ (i+1)*golden.
class Xoshiro256StarStar {
 public:
  Xoshiro256StarStar(std::uint64_t seed, std::uint64_t substream = 0) {
    SplitMix64 sm(seed ^ ((substream + 1) * 0x9E3779B97F4A7C15ULL));
    for (auto& s : s_) s = sm.next();
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

  // Uniform double in [0, 1) with 53 random bits.
  double uniform() { return double(next() >> 11) * 0x1.0p-53; }

  // Uniform integer in [0, bound) without modulo bias (Lemire rejection).
  std::uint64_t below(std::uint64_t bound) {
    for (;;) {
      std::uint64_t x = next();
      __uint128_t m = __uint128_t(x) * bound;
      std::uint64_t lo = std::uint64_t(m);
      if (lo >= bound || lo >= (0ULL - bound) % bound) return std::uint64_t(m >> 64);
    }
  }

  bool bernoulli(double p) { return uniform() < p; }

  static std::string name() { return "xoshiro256starstar/splitmix64"; }

 private:
  static std::uint64_t rotl(std::uint64_t x, int k) { return (x << k) | (x >> (64 - k)); }
  std::uint64_t s_[4];
};

}  // namespace pqcdet
