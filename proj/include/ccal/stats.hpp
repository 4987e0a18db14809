#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace ccal {

struct KsResult {
  double statistic = 0.0;
  double p_value = 1.0;
  std::size_t count = 0;
};

/// One-sample Kolmogorov-Smirnov test against the uniform distribution on
/// [0, 1]. The p-value uses the asymptotic Kolmogorov series with Stephens'
/// finite-sample adjustment, adequate for n in the dozens and beyond.
KsResult ks_uniform(std::vector<double> samples);

/// Ranks with ties replaced by their average rank (1-based).
std::vector<double> average_ranks(std::span<const double> values);

double pearson_correlation(std::span<const double> a, std::span<const double> b);

/// Spearman rank correlation (Pearson on average ranks).
double spearman_correlation(std::span<const double> a, std::span<const double> b);

/// Linear-interpolated quantile of an ascending-sorted sample, q in [0, 1].
double quantile_sorted(std::span<const double> sorted, double q);

}  // namespace ccal
