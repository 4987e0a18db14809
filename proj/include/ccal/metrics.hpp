#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace ccal {

/// -ln of the probability assigned to the true label (nats). Throws an
/// infinite-loss error when that probability is zero.
double log_loss(std::span<const double> prediction, int true_label);

/// Squared-error score against the one-hot true-label vector.
double brier_loss(std::span<const double> prediction, int true_label);

struct LossReport {
  double average_log_loss = 0.0;
  double standardized_brier_loss = 0.0;
  std::size_t count = 0;
  /// Observations whose true label got probability zero; when non-empty the
  /// average log loss is +inf and this field says where.
  std::vector<std::size_t> infinite_loss_indices;
};

/// Test-set averages: mean log loss and sqrt(sum of Brier losses / (k |Y|)).
LossReport loss_report(const std::vector<std::vector<double>>& predictions,
                       std::span<const int> true_labels, std::size_t label_count);

/// Non-negative entries summing to 1 within tol.
bool is_probability_vector(std::span<const double> p, double tol = 1e-12);

}  // namespace ccal
