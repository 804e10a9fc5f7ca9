#pragma once

#include <cstdint>
#include <random>
#include <span>
#include <string_view>

namespace adtn {

/// Named, seeded random stream. Every consumer of randomness in a run gets
/// its own stream derived from (seed, label, index) so that adding a
/// consumer never perturbs the draws seen by the others.
class RandomStream {
 public:
  RandomStream(std::uint64_t seed, std::string_view label, std::uint64_t index = 0);

  std::uint64_t next_u64() { return engine_(); }

  void fill(std::span<std::uint8_t> out);

  /// Uniform in [0, 1) with 53 bits of resolution.
  double unit();

  double uniform(double lo, double hi) { return lo + (hi - lo) * unit(); }

  /// Uniform integer in [0, bound). bound must be > 0.
  std::uint64_t below(std::uint64_t bound);

 private:
  std::mt19937_64 engine_;
};

/// 64-bit FNV-1a, used to turn stream labels into seed material.
std::uint64_t fnv1a64(std::string_view text);

}  // namespace adtn
