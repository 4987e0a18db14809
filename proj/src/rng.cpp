#include "ccal/rng.hpp"

namespace ccal {

namespace {
constexpr std::uint64_t kGolden = 0x9E3779B97F4A7C15ull;
}

std::uint64_t mix64(std::uint64_t x) {
  x ^= x >> 30;
  x *= 0xBF58476D1CE4E5B9ull;
  x ^= x >> 27;
  x *= 0x94D049BB133111EBull;
  x ^= x >> 31;
  return x;
}

std::uint64_t SplitMix64::next() {
  state_ += kGolden;
  return mix64(state_);
}

std::uint64_t SplitMix64::next_below(std::uint64_t bound) {
  // Reject the low remainder band so every residue is equally likely.
  const std::uint64_t threshold = (0 - bound) % bound;
  std::uint64_t r = next();
  while (r < threshold) r = next();
  return r % bound;
}

double SplitMix64::next_open_unit() {
  return (static_cast<double>(next() >> 11) + 0.5) * 0x1.0p-53;
}

void shuffle_indices(std::vector<std::size_t>& idx, SplitMix64& gen) {
  for (std::size_t i = idx.size(); i > 1; --i) {
    const std::size_t j = static_cast<std::size_t>(gen.next_below(i));
    std::swap(idx[i - 1], idx[j]);
  }
}

std::vector<std::size_t> random_permutation(std::size_t n, std::uint64_t seed) {
  std::vector<std::size_t> idx(n);
  for (std::size_t i = 0; i < n; ++i) idx[i] = i;
  SplitMix64 gen(seed);
  shuffle_indices(idx, gen);
  return idx;
}

TauSource::TauSource(std::uint64_t seed, std::uint64_t stream)
    : base_(mix64(seed + kGolden * (stream + 1))) {}

double TauSource::tau(std::uint64_t object_index, std::uint64_t label_index) const {
  std::uint64_t h = mix64(base_ + kGolden * (object_index + 1));
  h = mix64(h + kGolden * (label_index + 1));
  return (static_cast<double>(h >> 11) + 0.5) * 0x1.0p-53;
}

}  // namespace ccal
