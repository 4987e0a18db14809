#pragma once

#include <span>
#include <vector>

namespace ccal {

/// Piecewise-constant non-increasing density on [0, 1]. Piece k has level
/// levels[k] on the half-open interval (breakpoints[k], breakpoints[k+1]];
/// the first level also applies at 0. Integrates to 1.
struct AntitonicDensity {
  std::vector<double> breakpoints;  // 0 = b_0 < b_1 < ... < b_m = 1
  std::vector<double> levels;       // m non-negative, non-increasing values

  double at_one() const { return levels.back(); }
};

/// Nonparametric maximum-likelihood fit of a non-increasing density: the left
/// derivative of the least concave majorant of the empirical CDF, anchored at
/// (0, 0) and carried flat at height 1 out to x = 1. Implemented as a single
/// monotone-chain upper hull over the ECDF vertices (equivalent to pooling
/// adjacent slope violators), O(n log n) in the sample count.
///
/// Samples must lie in [0, 1]; duplicates accumulate ECDF jump height. Mass
/// beyond the largest sample gets level 0, so at_one() can be 0. Samples at
/// exactly 0 are folded into the first rising segment (their cumulative count
/// is kept, the degenerate vertical jump at 0 is not represented).
AntitonicDensity fit_antitonic_density(std::span<const double> samples);

/// Level of the piece whose half-open interval contains p; evaluate(g, 0)
/// returns the first level, and a breakpoint returns the level of the piece
/// ending there.
double evaluate(const AntitonicDensity& g, double p);

/// Throws unless the breakpoint/level structure satisfies every invariant
/// (ordering, monotonicity, unit integral within 1e-12).
void validate(const AntitonicDensity& g);

}  // namespace ccal
