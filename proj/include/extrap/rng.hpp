#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>
#include <random>

namespace extrap {

/// Deterministic random source. The engine is std::mt19937_64 (bit-exact by
/// the standard); uniform and normal draws are produced here rather than via
/// std distributions so that streams are reproducible across standard
/// library implementations. Substreams derive from (seed, stream id) with a
/// splitmix64 finalizer, so parallel and serial generation agree.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  static std::uint64_t mix(std::uint64_t z) {
    z += 0x9E3779B97F4A7C15ull;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
  }

  static Rng stream(std::uint64_t seed, std::uint64_t stream_id) {
    return Rng(mix(mix(seed) ^ mix(stream_id)));
  }

  std::uint64_t next_u64() { return engine_(); }

  /// Uniform in [0, 1).
  double uniform01() {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
  }

  double uniform(double a, double b) { return a + (b - a) * uniform01(); }

  /// Standard normal via Box-Muller (cosine branch only; stateless).
  double normal() {
    double u1 = 1.0 - uniform01();  // (0, 1]
    double u2 = uniform01();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
  }

  double normal(double mean, double stddev) { return mean + stddev * normal(); }

 private:
  std::mt19937_64 engine_;
};

}  // namespace extrap
