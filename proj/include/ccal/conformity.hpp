#pragma once

#include <limits>
#include <vector>

#include "ccal/dataset.hpp"
#include "ccal/distance.hpp"
#include "ccal/parallel.hpp"

namespace ccal {

/// Largest representable score; stands in for an infinite ratio so that all
/// scores stay finite and totally ordered.
inline constexpr double kMaxRatioScore = std::numeric_limits<double>::max();

/// Distance-ratio score (nearest other-label distance over nearest same-label
/// distance). Empty minima arrive as +inf. Only the relative order of scores
/// matters downstream, so the degenerate cases follow one fixed convention:
///   inf/inf -> 1       (no rivals either way)
///   0/0     -> 1
///   x/0     -> kMaxRatioScore
///   inf/x   -> kMaxRatioScore
///   x/inf   -> 0       (no same-label peer: maximally nonconforming)
/// and finite overflow clamps to kMaxRatioScore.
double ratio_score(double nearest_other_label, double nearest_same_label) noexcept;

/// Sequence-to-scores map, equivariant under permutations of the sequence.
class ConformityMeasure {
 public:
  virtual ~ConformityMeasure() = default;

  virtual std::vector<double> scores(const SequenceView& sequence) const = 0;

  std::vector<double> scores(const Dataset& sequence) const { return scores(sequence.view()); }
};

/// Per-element scores by the nearest-neighbour distance ratio. Full pairwise
/// scan; parallel and serial modes agree bit-for-bit.
std::vector<double> nn_ratio_scores(const SequenceView& sequence, const DistanceFn& d,
                                    ExecMode mode = ExecMode::Parallel);

/// Nearest-neighbour distance-ratio conformity measure over a pluggable
/// distance.
class NnRatioConformity final : public ConformityMeasure {
 public:
  explicit NnRatioConformity(DistanceFn d, ExecMode mode = ExecMode::Parallel)
      : d_(std::move(d)), mode_(mode) {}

  std::vector<double> scores(const SequenceView& sequence) const override {
    return nn_ratio_scores(sequence, d_, mode_);
  }

  const DistanceFn& distance() const { return d_; }

 private:
  DistanceFn d_;
  ExecMode mode_;
};

}  // namespace ccal
