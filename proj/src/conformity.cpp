#include "ccal/conformity.hpp"

#include <cmath>

namespace ccal {

double ratio_score(double nearest_other_label, double nearest_same_label) noexcept {
  const bool other_inf = std::isinf(nearest_other_label);
  const bool same_inf = std::isinf(nearest_same_label);
  if (other_inf && same_inf) return 1.0;
  if (nearest_other_label == 0.0 && nearest_same_label == 0.0) return 1.0;
  if (nearest_same_label == 0.0 || other_inf) return kMaxRatioScore;
  if (same_inf) return 0.0;
  const double r = nearest_other_label / nearest_same_label;
  return r > kMaxRatioScore ? kMaxRatioScore : r;
}

std::vector<double> nn_ratio_scores(const SequenceView& sequence, const DistanceFn& d,
                                    ExecMode mode) {
  const std::size_t n = sequence.size();
  std::vector<double> out(n);
  parallel_for(n, mode, [&](std::size_t i) {
    const auto xi = sequence.row(i);
    const int yi = sequence.labels[i];
    double nearest_same = std::numeric_limits<double>::infinity();
    double nearest_other = std::numeric_limits<double>::infinity();
    for (std::size_t j = 0; j < n; ++j) {
      if (j == i) continue;
      const double dist = d(xi, sequence.row(j));
      if (sequence.labels[j] == yi) {
        if (dist < nearest_same) nearest_same = dist;
      } else {
        if (dist < nearest_other) nearest_other = dist;
      }
    }
    out[i] = ratio_score(nearest_other, nearest_same);
  });
  return out;
}

}  // namespace ccal
