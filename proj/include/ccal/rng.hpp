#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

namespace ccal {

/// SplitMix64 output finalizer (Steele/Lea/Vigna constants) as a pure
/// 64->64 avalanche. All seeded behaviour in this library reduces to this
/// one function, which pins results to the bit across platforms.
std::uint64_t mix64(std::uint64_t x);

/// Counter-based SplitMix64 generator: state advances by a fixed odd
/// increment, output is mix64(state).
class SplitMix64 {
 public:
  explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next();

  /// Unbiased uniform draw in [0, bound) via modulo rejection.
  std::uint64_t next_below(std::uint64_t bound);

  /// Uniform double in the open interval (0, 1): ((x >> 11) + 0.5) * 2^-53.
  double next_open_unit();

 private:
  std::uint64_t state_;
};

/// In-place Fisher-Yates shuffle driven by the given generator.
void shuffle_indices(std::vector<std::size_t>& idx, SplitMix64& gen);

/// The identity permutation of size n, Fisher-Yates shuffled with `seed`.
std::vector<std::size_t> random_permutation(std::size_t n, std::uint64_t seed);

/// Addressable source of uniform tau draws in (0, 1). A draw depends only on
/// (seed, stream, object index, label index) and never on evaluation order,
/// so concurrent and sequential evaluations agree exactly.
class TauSource {
 public:
  explicit TauSource(std::uint64_t seed, std::uint64_t stream = 0);

  double tau(std::uint64_t object_index, std::uint64_t label_index) const;

 private:
  std::uint64_t base_;
};

}  // namespace ccal
