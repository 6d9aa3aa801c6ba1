#pragma once

#include <cmath>
#include <cstdint>
#include <stdexcept>

namespace ardl {

/// SplitMix64 finalizer. Used both as the generator's output function and to
/// derive independent substream states from (seed, index) pairs.
inline std::uint64_t mix64(std::uint64_t z) {
  z += 0x9E3779B97F4A7C15ULL;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

/// Deterministic random stream with a documented, versioned algorithm so that
/// seeds and fixtures are portable across builds.
///
/// Algorithm (v1):
///   - core generator: SplitMix64 — state advances by the golden-ratio gamma
///     0x9E3779B97F4A7C15 and each output is the mix64 finalizer of the new
///     state;
///   - uniform doubles: next_u64() mapped to (0, 1] as ((u >> 11) + 1) * 2^-53;
///   - gaussians: Box-Muller on a uniform pair, cosine branch first, sine
///     branch cached and returned on the next call;
///   - bounded integers: multiply-shift (u * n) >> 64, 128-bit intermediate;
///   - substreams: stream(seed, i) seeds a fresh generator with
///     mix64(mix64(seed) + i). Substreams never share state with the parent,
///     so parallel consumers stay schedule-independent.
/// Seed of the substream keyed by (seed, index). Nesting substream_seed
/// calls yields a tree of independent streams from one root seed.
inline std::uint64_t substream_seed(std::uint64_t seed, std::uint64_t index) {
  return mix64(mix64(seed) + index);
}

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : state_(seed) {}

  /// Independent substream keyed by (seed, index).
  static Rng stream(std::uint64_t seed, std::uint64_t index) {
    return Rng(substream_seed(seed, index));
  }

  std::uint64_t next_u64() {
    state_ += 0x9E3779B97F4A7C15ULL;
    std::uint64_t z = state_;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
  }

  /// Uniform double in (0, 1]; never returns 0, so log() is safe.
  double uniform01() {
    return static_cast<double>((next_u64() >> 11) + 1) * 0x1.0p-53;
  }

  /// Uniform integer in [0, n). Multiply-shift bound; bias is O(n / 2^64).
  std::uint64_t uniform_below(std::uint64_t n) {
    if (n == 0) throw std::invalid_argument("uniform_below: n must be > 0");
    return static_cast<std::uint64_t>(
        (static_cast<unsigned __int128>(next_u64()) * n) >> 64);
  }

  /// Standard normal deviate (Box-Muller).
  double gaussian() {
    if (has_cached_) {
      has_cached_ = false;
      return cached_;
    }
    const double u1 = uniform01();
    const double u2 = uniform01();
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double a = 2.0 * 3.14159265358979323846 * u2;
    cached_ = r * std::sin(a);
    has_cached_ = true;
    return r * std::cos(a);
  }

 private:
  std::uint64_t state_;
  double cached_ = 0.0;
  bool has_cached_ = false;
};

}  // namespace ardl
