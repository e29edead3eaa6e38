#pragma once

#include <cstdint>
#include <cmath>

// Counter-based and stream RNG. Site masks are pure functions of
// (seed, x, t) so fields are reproducible independent of traversal
// order and thread count; Monte Carlo replicates get independent
// streams derived by hashing (seed, replicate_index).

namespace bnet::rng {

inline std::uint64_t splitmix64(std::uint64_t z) {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

// 64-bit hash of a (seed, x, t) key. Coordinates are sign-folded so
// negative values hash as well as positive ones.
inline std::uint64_t site_hash(std::uint64_t seed, long long x, long long t) {
  std::uint64_t h = splitmix64(seed ^ 0x6a09e667f3bcc909ULL);
  h = splitmix64(h ^ (static_cast<std::uint64_t>(x) * 0xd6e8feb86659fd93ULL));
  h = splitmix64(h ^ (static_cast<std::uint64_t>(t) * 0xa2f8d3bca2f8d3bdULL));
  return h;
}

// Uniform double in [0,1) from the top 53 bits.
inline double to_unit(std::uint64_t h) {
  return static_cast<double>(h >> 11) * 0x1.0p-53;
}

inline std::uint64_t stream_seed(std::uint64_t seed, std::uint64_t replicate) {
  return splitmix64(splitmix64(seed ^ 0x243f6a8885a308d3ULL) ^ replicate);
}

// xoshiro256++ with polar Box-Muller normals. Self-contained so results
// do not depend on standard-library distribution internals.
class Stream {
 public:
  explicit Stream(std::uint64_t seed) {
    std::uint64_t z = seed;
    for (auto& si : s_) {
      z = splitmix64(z);
      si = z;
    }
    // avoid the all-zero state
    if ((s_[0] | s_[1] | s_[2] | s_[3]) == 0) s_[0] = 1;
  }

  std::uint64_t next_u64() {
    const std::uint64_t result = rotl(s_[0] + s_[3], 23) + s_[0];
    const std::uint64_t t = s_[1] << 17;
    s_[2] ^= s_[0];
    s_[3] ^= s_[1];
    s_[1] ^= s_[2];
    s_[0] ^= s_[3];
    s_[2] ^= t;
    s_[3] = rotl(s_[3], 45);
    return result;
  }

  double uniform() { return to_unit(next_u64()); }

  // uniform in (0,1], safe as a log argument
  double uniform_pos() { return 1.0 - uniform(); }

  double normal() {
    if (has_spare_) {
      has_spare_ = false;
      return spare_;
    }
    double u, v, s;
    do {
      u = 2.0 * uniform() - 1.0;
      v = 2.0 * uniform() - 1.0;
      s = u * u + v * v;
    } while (s >= 1.0 || s == 0.0);
    const double m = std::sqrt(-2.0 * std::log(s) / s);
    spare_ = v * m;
    has_spare_ = true;
    return u * m;
  }

  double exponential(double mean) { return -mean * std::log(uniform_pos()); }

 private:
  static std::uint64_t rotl(std::uint64_t x, int k) {
    return (x << k) | (x >> (64 - k));
  }
  std::uint64_t s_[4];
  double spare_ = 0.0;
  bool has_spare_ = false;
};

}  // namespace bnet::rng
