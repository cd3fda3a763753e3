#pragma once

#include <cstdint>
#include <limits>
#include <span>
#include <vector>

namespace mmspace {

/// Counter-based SplitMix64 stream. Draw k of stream (seed, stream) is a pure
/// function of (seed, stream, k), so trial i of an experiment can be replayed
/// on its own with CounterRng(master_seed, i).
class CounterRng {
 public:
  using result_type = std::uint64_t;

  explicit CounterRng(std::uint64_t seed, std::uint64_t stream = 0)
      : key_(mix(seed ^ mix(stream + 0x632BE59BD9B4E019ULL))) {}

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() { return std::numeric_limits<result_type>::max(); }

  result_type operator()() { return mix(key_ + (++counter_) * 0x9E3779B97F4A7C15ULL); }

  /// Uniform on [0, 1) with 53 random bits.
  double uniform() { return static_cast<double>((*this)() >> 11) * 0x1.0p-53; }

  /// Uniform integer in [0, n).
  std::uint64_t below(std::uint64_t n) {
    // Lemire-style rejection keeps the result unbiased.
    const std::uint64_t limit = max() - max() % n;
    std::uint64_t x;
    do x = (*this)();
    while (x >= limit);
    return x % n;
  }

  std::uint64_t counter() const { return counter_; }

  static constexpr std::uint64_t mix(std::uint64_t z) {
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
  }

 private:
  std::uint64_t key_;
  std::uint64_t counter_ = 0;
};

/// Cumulative sums of a mass vector, last entry forced to 1.
std::vector<double> cumulative(std::span<const double> mass);

/// Index i with cdf[i-1] <= u < cdf[i], skipping zero-mass atoms.
std::size_t draw_categorical(std::span<const double> cdf, CounterRng& rng);

}  // namespace mmspace
