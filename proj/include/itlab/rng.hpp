#pragma once

#include <cstdint>

namespace itlab {

/// Identifies one reproducible random stream. Identical (master_seed,
/// stream_index) pairs produce identical output regardless of execution
/// order or parallelism; derived child streams are decorrelated by a
/// splitmix-style hash, so trial i of experiment A never aliases trial j
/// of experiment B.
struct SeedSpec {
  std::uint64_t master_seed = 0;
  std::uint64_t stream_index = 0;
};

/// splitmix64 finalizer (Vigna). Bijective on 64-bit words.
constexpr std::uint64_t mix64(std::uint64_t z) {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

/// Counter-based child-stream derivation: hash of (seed, stream).
constexpr std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream) {
  return mix64(mix64(seed) ^ (stream * 0x9e3779b97f4a7c15ULL + 0x632be59bd9b4e019ULL));
}

/// Minimal deterministic PRNG used by every randomized operation in the
/// library. Hand-rolled so that generated bytes are identical across
/// platforms and standard library versions (std::uniform_int_distribution
/// is not portable).
class Rng {
 public:
  explicit Rng(std::uint64_t state) : state_(state) {}
  explicit Rng(const SeedSpec& spec) : state_(derive_seed(spec.master_seed, spec.stream_index)) {}

  std::uint64_t next() {
    state_ += 0x9e3779b97f4a7c15ULL;
    std::uint64_t z = state_;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  /// Unbiased uniform draw from [0, bound); bound must be nonzero.
  /// Rejection sampling over the top of the 64-bit range.
  std::uint64_t below(std::uint64_t bound) {
    const std::uint64_t threshold = (0 - bound) % bound;  // 2^64 mod bound
    for (;;) {
      const std::uint64_t x = next();
      if (x >= threshold) return x % bound;
    }
  }

  /// Uniform double in [0, 1) with 53 random bits.
  double unit() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

 private:
  std::uint64_t state_;
};

}  // namespace itlab
