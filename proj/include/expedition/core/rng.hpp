#pragma once

#include <array>
#include <cmath>
#include <cstdint>

#include "expedition/core/geometry.hpp"

namespace expedition {

/// splitmix64 finalizer; also used to derive independent stream seeds.
inline std::uint64_t mix64(std::uint64_t z) {
  z += 0x9E3779B97F4A7C15ULL;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

inline std::uint64_t derive_seed(std::uint64_t a, std::uint64_t b) {
  return mix64(mix64(a) ^ (0x6A09E667F3BCC909ULL + b));
}

inline std::uint64_t derive_seed(std::uint64_t a, std::uint64_t b, std::uint64_t c) {
  return derive_seed(derive_seed(a, b), c);
}

/// xoshiro256++ with all streams derived from an explicit seed. Every draw is
/// a pure function of the seed and the call sequence, so identical seeds give
/// bit-identical results on any platform.
class Rng {
public:
  explicit Rng(std::uint64_t seed) : seed_(seed) {
    std::uint64_t s = seed;
    for (auto& w : state_) {
      s = mix64(s);
      w = s;
    }
  }

  std::uint64_t next_u64() {
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

  /// Uniform double in [0, 1).
  double uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + uniform() * (hi - lo); }

  /// Uniform integer in [0, n). n must be > 0.
  int uniform_int(int n) { return static_cast<int>(next_u64() % static_cast<std::uint64_t>(n)); }

  /// Standard normal via Box-Muller; consumes exactly two uniforms.
  double gaussian() {
    const double u1 = 1.0 - uniform();  // (0, 1]
    const double u2 = uniform();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(kTwoPi * u2);
  }

  /// Independent child stream. Derived from the original seed and the tag, so
  /// forks are stable no matter how much the parent has been advanced.
  Rng fork(std::uint64_t tag) const { return Rng(derive_seed(seed_, tag)); }

  std::uint64_t seed() const { return seed_; }

private:
  static std::uint64_t rotl(std::uint64_t x, int k) { return (x << k) | (x >> (64 - k)); }

  std::uint64_t seed_;
  std::array<std::uint64_t, 4> state_{};
};

}  // namespace expedition
