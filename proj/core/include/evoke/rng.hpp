#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>
#include <random>
#include <span>
#include <utility>

namespace evoke {

// Deterministic random source. Every stochastic routine in the library draws
// through this wrapper so results depend only on the seed, never on the
// standard library's (implementation-defined) distribution code.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : seed_(seed), engine_(seed) {}

  std::uint64_t next_u64() { return engine_(); }

  // Uniform in [0, 1) with 53-bit resolution.
  double uniform() {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
  }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  // Uniform index in [0, n). n must be positive.
  std::size_t uniform_index(std::size_t n) { return next_u64() % n; }

  // Cauchy noise: half of the samples fall within [-scale, scale].
  double cauchy(double scale) {
    return scale * std::tan(std::numbers::pi * (uniform() - 0.5));
  }

  template <typename T>
  void shuffle(std::span<T> values) {
    for (std::size_t i = values.size(); i > 1; --i) {
      std::swap(values[i - 1], values[uniform_index(i)]);
    }
  }

  // Independent child stream. Depends only on (seed, stream), not on how much
  // of this instance has already been consumed, so parallel schedules cannot
  // change results.
  Rng child(std::uint64_t stream) const {
    return Rng(split_mix(seed_ ^ (0x9e3779b97f4a7c15ull * (stream + 1))));
  }

  std::uint64_t seed() const { return seed_; }

 private:
  static std::uint64_t split_mix(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ull;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
    return x ^ (x >> 31);
  }

  std::uint64_t seed_;
  std::mt19937_64 engine_;
};

}  // namespace evoke
