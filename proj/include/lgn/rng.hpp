#pragma once

#include <cstdint>
#include <vector>

namespace lgn {

/** splitmix64 step; also used to mix seeds into independent stream seeds. */
inline uint64_t splitmix64(uint64_t& state) {
  uint64_t z = (state += 0x9e3779b97f4a7c15ull);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
  return z ^ (z >> 31);
}

/** Derive a stream seed from (seed, tag); stable across platforms. */
inline uint64_t mix_seed(uint64_t seed, uint64_t tag) {
  uint64_t s = seed ^ (0x9e3779b97f4a7c15ull * (tag + 1));
  return splitmix64(s);
}

/**
 * xoshiro256** generator. All randomness in the toolkit flows through this
 * class; the C++ standard distributions are implementation-defined and would
 * break cross-platform reproducibility.
 */
class Rng {
 public:
  explicit Rng(uint64_t seed) {
    uint64_t sm = seed;
    for (auto& w : s_) w = splitmix64(sm);
  }

  uint64_t next() {
    uint64_t* s = s_;
    uint64_t result = rotl(s[1] * 5, 7) * 9;
    uint64_t t = s[1] << 17;
    s[2] ^= s[0];
    s[3] ^= s[1];
    s[1] ^= s[2];
    s[0] ^= s[3];
    s[2] ^= t;
    s[3] = rotl(s[3], 45);
    return result;
  }

  /** Uniform double in [0, 1) with 53 random bits. */
  double uniform() { return double(next() >> 11) * 0x1.0p-53; }

  /** Uniform double in [lo, hi). */
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  /** Uniform integer in [0, n) by rejection; unbiased for any n ≥ 1. */
  uint64_t below(uint64_t n) {
    uint64_t threshold = (0 - n) % n;  // 2^64 mod n
    for (;;) {
      uint64_t r = next();
      if (r >= threshold) return r % n;
    }
  }

  bool bernoulli(double p) { return uniform() < p; }

 private:
  static uint64_t rotl(uint64_t x, int k) { return (x << k) | (x >> (64 - k)); }
  uint64_t s_[4];
};

/** In-place Fisher–Yates shuffle driven by `rng`. */
template <typename T>
void shuffle(std::vector<T>& v, Rng& rng) {
  for (size_t i = v.size(); i > 1; --i) {
    size_t j = size_t(rng.below(i));
    std::swap(v[i - 1], v[j]);
  }
}

}  // namespace lgn
