#include "ccal/metrics.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace ccal {

namespace {

double true_label_probability(std::span<const double> prediction, int true_label) {
  if (true_label < 0 || static_cast<std::size_t>(true_label) >= prediction.size())
    throw std::out_of_range("unknown true label");
  return prediction[static_cast<std::size_t>(true_label)];
}

}  // namespace

double log_loss(std::span<const double> prediction, int true_label) {
  const double p = true_label_probability(prediction, true_label);
  if (!(p > 0.0))
    throw std::runtime_error("infinite log loss: true label has probability zero");
  return -std::log(p);
}

double brier_loss(std::span<const double> prediction, int true_label) {
  if (true_label < 0 || static_cast<std::size_t>(true_label) >= prediction.size())
    throw std::out_of_range("unknown true label");
  double sum = 0.0;
  for (std::size_t y = 0; y < prediction.size(); ++y) {
    const double target = static_cast<int>(y) == true_label ? 1.0 : 0.0;
    const double d = target - prediction[y];
    sum += d * d;
  }
  return sum;
}

LossReport loss_report(const std::vector<std::vector<double>>& predictions,
                       std::span<const int> true_labels, std::size_t label_count) {
  if (predictions.size() != true_labels.size())
    throw std::invalid_argument("predictions and labels must have equal length");
  if (predictions.empty()) throw std::invalid_argument("nothing to score");

  LossReport report;
  report.count = predictions.size();
  double log_sum = 0.0;
  double brier_sum = 0.0;
  for (std::size_t i = 0; i < predictions.size(); ++i) {
    if (predictions[i].size() != label_count)
      throw std::invalid_argument("prediction " + std::to_string(i) + " has wrong length");
    const double p = true_label_probability(predictions[i], true_labels[i]);
    if (p > 0.0)
      log_sum += -std::log(p);
    else
      report.infinite_loss_indices.push_back(i);
    brier_sum += brier_loss(predictions[i], true_labels[i]);
  }
  report.average_log_loss = report.infinite_loss_indices.empty()
                                ? log_sum / static_cast<double>(report.count)
                                : std::numeric_limits<double>::infinity();
  report.standardized_brier_loss = std::sqrt(
      brier_sum / (static_cast<double>(report.count) * static_cast<double>(label_count)));
  return report;
}

bool is_probability_vector(std::span<const double> p, double tol) {
  double sum = 0.0;
  for (double v : p) {
    if (!(v >= 0.0)) return false;
    sum += v;
  }
  return std::abs(sum - 1.0) <= tol;
}

}  // namespace ccal
