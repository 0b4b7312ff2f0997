#pragma once

#include <cstdint>
#include <initializer_list>
#include <limits>

namespace tpauc {

/// SplitMix64 finalizer; a bijective 64-bit mixer.
std::uint64_t mix64(std::uint64_t x) noexcept;

/// Counter-based generator: output k is mix64(key + k * golden), where the key
/// is derived from a seed and any number of stream coordinates (epoch, step,
/// trial, ...). Two generators built from the same coordinates replay the
/// same sequence; no state is shared between streams.
///
/// Satisfies UniformRandomBitGenerator so it plugs into <random> distributions.
class CounterRng {
 public:
  using result_type = std::uint64_t;

  explicit CounterRng(std::uint64_t seed, std::initializer_list<std::uint64_t> stream = {});

  result_type operator()() noexcept;

  static constexpr result_type min() noexcept { return 0; }
  static constexpr result_type max() noexcept { return std::numeric_limits<result_type>::max(); }

  /// Uniform double in [0, 1) with 53 random bits.
  double uniform() noexcept;

 private:
  std::uint64_t key_;
  std::uint64_t counter_ = 0;
};

}  // namespace tpauc
