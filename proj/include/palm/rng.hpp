#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>

namespace palm {

/// Deterministic, platform-independent pseudo-random generator.
///
/// Core stream: xoshiro256**. State s[0..3]; each draw returns
///   r = rotl(s[1] * 5, 7) * 9
/// and updates the state with
///   t = s[1] << 17; s[2]^=s[0]; s[3]^=s[1]; s[1]^=s[2]; s[0]^=s[3];
///   s[2]^=t; s[3] = rotl(s[3], 45).
/// Seeding: four rounds of splitmix64 (z += 0x9E3779B97F4A7C15;
/// z = (z ^ z>>30) * 0xBF58476D1CE4E5B9; z = (z ^ z>>27) *
/// 0x94D049BB133111EB; return z ^ z>>31) applied to the seed.
///
/// Same seed gives a bit-identical stream on every platform, which the
/// golden tests and byte-identical output files rely on.
class Rng {
 public:
  explicit Rng(uint64_t seed) {
    uint64_t z = seed;
    for (auto& word : s_) word = splitmix64(z);
  }

  uint64_t next_u64() {
    uint64_t result = rotl(s_[1] * 5, 7) * 9;
    uint64_t t = s_[1] << 17;
    s_[2] ^= s_[0];
    s_[3] ^= s_[1];
    s_[1] ^= s_[2];
    s_[0] ^= s_[3];
    s_[2] ^= t;
    s_[3] = rotl(s_[3], 45);
    return result;
  }

  /// Uniform double in [0, 1) with 53 random bits.
  double next_double() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  /// Unbiased uniform integer in [0, bound) via rejection.
  uint64_t next_below(uint64_t bound) {
    if (bound == 0) return 0;
    uint64_t rem = (~uint64_t{0}) % bound;  // 2^64 mod bound == rem + 1 (mod bound)
    if (rem + 1 == bound) return next_u64() % bound;  // bound divides 2^64
    uint64_t zone = ~uint64_t{0} - rem;               // multiple of bound
    uint64_t x;
    do {
      x = next_u64();
    } while (x >= zone);
    return x % bound;
  }

  /// Standard normal pair via Box-Muller.
  void next_normal_pair(double& a, double& b) {
    double u1;
    do {
      u1 = next_double();
    } while (u1 == 0.0);
    double u2 = next_double();
    double r = std::sqrt(-2.0 * std::log(u1));
    double theta = 2.0 * std::numbers::pi_v<double> * u2;
    a = r * std::cos(theta);
    b = r * std::sin(theta);
  }

 private:
  static uint64_t rotl(uint64_t x, int k) { return (x << k) | (x >> (64 - k)); }

  static uint64_t splitmix64(uint64_t& z) {
    z += 0x9E3779B97F4A7C15ULL;
    uint64_t r = z;
    r = (r ^ (r >> 30)) * 0xBF58476D1CE4E5B9ULL;
    r = (r ^ (r >> 27)) * 0x94D049BB133111EBULL;
    return r ^ (r >> 31);
  }

  uint64_t s_[4];
};

}  // namespace palm
