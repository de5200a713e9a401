#pragma once

#include <cstdint>
#include <limits>
#include <span>
#include <string_view>

namespace iotchain::core {

/// xoshiro256** seeded through splitmix64. Every derived quantity (uniforms,
/// normals, bounded integers, shuffles) is computed here rather than through
/// <random> distributions, whose outputs differ between standard libraries.
class Rng {
 public:
  using result_type = std::uint64_t;

  explicit Rng(std::uint64_t seed);

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() { return std::numeric_limits<result_type>::max(); }
  result_type operator()() { return next_u64(); }

  std::uint64_t seed() const { return seed_; }

  std::uint64_t next_u64();
  /// Uniform in [0, 1) with 53 random bits.
  double uniform();
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
  /// Uniform integer in [0, bound). bound must be positive.
  std::uint64_t below(std::uint64_t bound);
  /// Standard normal via Box-Muller (cached second variate).
  double normal();
  double normal(double mean, double stddev) { return mean + stddev * normal(); }

  /// Independent generator for a named sub-stream; does not advance *this.
  Rng fork(std::string_view stream) const;
  Rng fork(std::uint64_t stream) const;

  template <typename T>
  void shuffle(std::span<T> items) {
    for (std::size_t i = items.size(); i > 1; --i) {
      const auto j = static_cast<std::size_t>(below(i));
      std::swap(items[i - 1], items[j]);
    }
  }

 private:
  std::uint64_t seed_;
  std::uint64_t s_[4];
  double cached_normal_ = 0.0;
  bool has_cached_normal_ = false;
};

/// 64-bit FNV-1a, used to turn names into stream ids.
std::uint64_t fnv1a64(std::string_view text);

}  // namespace iotchain::core
