#pragma once

#include <array>
#include <cstdint>
#include <limits>
#include <string_view>

#include "pcyl/vec.hpp"

namespace pcyl {

/// Philox4x32-10 block function; a pure function of (counter, key).
struct Philox4x32 {
  using Counter = std::array<std::uint32_t, 4>;
  using Key = std::array<std::uint32_t, 2>;
  static Counter block(Counter ctr, Key key);
};

std::uint64_t splitmix64(std::uint64_t x);
std::uint64_t hash_label(std::string_view label);

/// Labels that select an independent substream under one master seed.
struct SeedDerivation {
  std::uint64_t master_seed = 0;
  std::uint64_t experiment = 0;
  std::uint64_t replicate = 0;
  std::uint64_t draw = 0;

  /// 64-bit stream id packed into the upper counter words.
  std::uint64_t stream_id() const;
};

/// Counter-based generator: key = master seed, counter = (block, stream id).
/// Satisfies UniformRandomBitGenerator with 64-bit output, so it plugs into
/// Boost.Random distributions.
class CounterRng {
 public:
  using result_type = std::uint64_t;

  explicit CounterRng(const SeedDerivation& labels);

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() { return std::numeric_limits<result_type>::max(); }
  result_type operator()();

  /// Uniform on [0, 1) with 53 random bits.
  double uniform01() { return static_cast<double>((*this)() >> 11) * 0x1.0p-53; }
  /// Uniform on (0, 1).
  double uniform_open() {
    return (static_cast<double>((*this)() >> 11) + 0.5) * 0x1.0p-53;
  }

 private:
  Philox4x32::Key key_{};
  std::uint64_t stream_ = 0;
  std::uint64_t block_ = 0;
  Philox4x32::Counter buffer_{};
  int used_ = 4;
};

/// Standard normal deviates (Boost ziggurat over CounterRng).
double standard_normal(CounterRng& rng);
/// Isotropic unit vector in R^d.
Vec uniform_direction(CounterRng& rng, int d);
/// Poisson deviate with the given mean (Boost PTRD / inversion).
std::int64_t poisson(CounterRng& rng, double mean);

}  // namespace pcyl
