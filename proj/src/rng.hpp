#pragma once

#include <cmath>
#include <cstdint>

namespace hdb {

// Deterministic 64-bit PRNG used for every random decision in the project
// (never the platform default generator, so results are stable across
// standard libraries).
//
// State update is the xorshift64* recurrence:
//   x ^= x >> 12;  x ^= x << 25;  x ^= x >> 27;  output = x * 0x2545F4914F6CDD1D
// Seeds are whitened once with the SplitMix64 finalizer
//   z = (seed + 0x9E3779B97F4A7C15); z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9;
//   z = (z ^ (z >> 27)) * 0x94D049BB133111EB; z = z ^ (z >> 31)
// so that small consecutive seeds produce unrelated streams.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : state_(splitmix64(seed)) {
    if (state_ == 0) state_ = 0x9E3779B97F4A7C15ULL;  // xorshift state must be nonzero
  }

  std::uint64_t next_u64() {
    std::uint64_t x = state_;
    x ^= x >> 12;
    x ^= x << 25;
    x ^= x >> 27;
    state_ = x;
    return x * 0x2545F4914F6CDD1DULL;
  }

  // Uniform in [0, 1) from the top 53 bits.
  double uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  // Uniform integer in [0, bound). Rejection-free modulo is fine here; bound
  // is always tiny compared to 2^64 so the bias is negligible for shuffles
  // and pixel draws.
  std::uint64_t uniform_below(std::uint64_t bound) { return next_u64() % bound; }

  // Standard normal via Box-Muller; the second value of each pair is cached.
  double normal() {
    if (have_cached_) {
      have_cached_ = false;
      return cached_;
    }
    double u1 = uniform();
    double u2 = uniform();
    while (u1 <= 0.0) u1 = uniform();
    double r = std::sqrt(-2.0 * std::log(u1));
    double a = 2.0 * 3.14159265358979323846 * u2;
    cached_ = r * std::sin(a);
    have_cached_ = true;
    return r * std::cos(a);
  }

  static std::uint64_t splitmix64(std::uint64_t z) {
    z += 0x9E3779B97F4A7C15ULL;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
  }

  // Derives an independent stream seed, e.g. one per image id.
  static std::uint64_t mix(std::uint64_t seed, std::uint64_t stream) {
    return splitmix64(seed ^ (0xD1B54A32D192ED03ULL * (stream + 1)));
  }

 private:
  std::uint64_t state_;
  double cached_ = 0.0;
  bool have_cached_ = false;
};

}  // namespace hdb
