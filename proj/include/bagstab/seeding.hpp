#pragma once

// Counter-based seed derivation. Every random quantity in a run is drawn from
// a generator seeded by a hash of (master seed, stream, index), so results do
// not depend on evaluation order or thread count.

#include <cstdint>
#include <limits>

namespace bagstab {

std::uint64_t splitmix64(std::uint64_t x);

/// Seed for item `index` of stream `stream` under `master`.
std::uint64_t derive_seed(std::uint64_t master, std::uint64_t stream, std::uint64_t index);

/// SplitMix64 as a UniformRandomBitGenerator.
class SplitMix64 {
 public:
  using result_type = std::uint64_t;

  explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() { return std::numeric_limits<result_type>::max(); }

  result_type operator()();

 private:
  std::uint64_t state_;
};

/// Unbiased integer in [0, bound) (Lemire's multiply-and-reject).
std::uint64_t uniform_below(SplitMix64& gen, std::uint64_t bound);

/// Uniform double in [0, 1) with 53 random bits.
double uniform_unit(SplitMix64& gen);

}  // namespace bagstab
