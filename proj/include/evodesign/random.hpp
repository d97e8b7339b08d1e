#pragma once

#include <cstdint>
#include <limits>
#include <random>
#include <stdexcept>

namespace evodesign {

/// Deterministic random stream. Every stochastic operation in the workbench
/// draws from one of these, so a (seed, call sequence) pair fully determines
/// the outcome independent of platform or standard-library distributions.
class RandomSource {
 public:
  explicit RandomSource(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next_u64() { return engine_(); }

  /// Unbiased uniform draw from [0, n). Rejection-sampled.
  std::size_t uniform_index(std::size_t n) {
    if (n == 0) throw std::invalid_argument("uniform_index: n must be positive");
    const std::uint64_t bound = n;
    std::uint64_t x, r;
    do {
      x = engine_();
      r = x % bound;
    } while (x - r > std::numeric_limits<std::uint64_t>::max() - (bound - 1));
    return static_cast<std::size_t>(r);
  }

  /// Uniform integer in [lo, hi] inclusive.
  std::int64_t uniform_int(std::int64_t lo, std::int64_t hi) {
    if (lo > hi) throw std::invalid_argument("uniform_int: empty range");
    return lo + static_cast<std::int64_t>(
                    uniform_index(static_cast<std::size_t>(hi - lo) + 1));
  }

  /// Uniform double in [0, 1) with 53 random bits.
  double uniform_real01() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  bool bernoulli(double p) { return uniform_real01() < p; }

 private:
  std::mt19937_64 engine_;
};

}  // namespace evodesign
