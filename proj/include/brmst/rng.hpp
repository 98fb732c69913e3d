#pragma once

#include <array>
#include <cstdint>
#include <limits>

namespace brmst {

/// xoshiro256** (Blackman & Vigna) seeded through splitmix64.
///
/// Independent streams come from (seed, stream): the 256-bit state is four
/// successive splitmix64 outputs started at seed ^ (stream * 0x9E3779B97F4A7C15).
/// Satisfies UniformRandomBitGenerator.
class Xoshiro256 {
 public:
  using result_type = std::uint64_t;

  explicit Xoshiro256(std::uint64_t seed, std::uint64_t stream = 0);

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() { return std::numeric_limits<result_type>::max(); }
  result_type operator()();

  /// Uniform on [0, 1) with 53 random bits.
  double uniform();
  /// Uniform on (0, 1).
  double uniform_open();
  /// Standard normal by Box-Muller (one output per call).
  double normal();
  double normal(double mean, double sd) { return mean + sd * normal(); }

 private:
  std::array<std::uint64_t, 4> state_{};
};

/// Deterministic child seed for a (seed, index) pair.
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t index);

}  // namespace brmst
