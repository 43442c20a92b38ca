#pragma once

#include <cstdint>
#include <string_view>

namespace gipsa {

/// Counter-based 64-bit generator: draw i is the SplitMix64 finalizer applied
/// to seed + (i + 1) * 0x9E3779B97F4A7C15. Any draw can be recomputed from
/// (seed, i) alone, so streams are reproducible across implementations.
class CounterRng {
 public:
  static constexpr std::string_view kName = "splitmix64-counter";

  explicit CounterRng(std::uint64_t seed, std::uint64_t counter = 0) noexcept
      : seed_(seed), counter_(counter) {}

  static std::uint64_t at(std::uint64_t seed, std::uint64_t index) noexcept;

  std::uint64_t next_u64() noexcept { return at(seed_, counter_++); }

  /// Uniform in the open interval (0, 1): ((x >> 11) + 0.5) * 2^-53.
  double next_uniform() noexcept;

  /// Standard normal via the inverse normal CDF of next_uniform().
  double next_normal() noexcept;

  /// Uniform integer in [0, bound) via the high word of a 128-bit product.
  std::uint64_t next_below(std::uint64_t bound) noexcept;

  std::uint64_t seed() const noexcept { return seed_; }
  std::uint64_t counter() const noexcept { return counter_; }

 private:
  std::uint64_t seed_;
  std::uint64_t counter_;
};

/// Inverse of the standard normal CDF for p in (0, 1). Rational initial
/// approximation refined by one Halley step against std::erfc; relative
/// accuracy close to machine precision.
double inverse_normal_cdf(double p);

}  // namespace gipsa
