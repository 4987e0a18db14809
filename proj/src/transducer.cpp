#include "ccal/transducer.hpp"

#include <algorithm>
#include <stdexcept>

namespace ccal {

bool PredictionSet::contains(int label) const {
  return std::binary_search(labels.begin(), labels.end(), label);
}

double label_conditional_pvalue(std::span<const double> scores, std::span<const int> labels,
                                std::size_t target_index, int label, double tau) {
  if (scores.size() != labels.size())
    throw std::invalid_argument("scores and labels must have equal length");
  if (target_index >= labels.size()) throw std::out_of_range("target index out of range");
  if (labels[target_index] != label)
    throw std::invalid_argument("label mismatch at target index");
  if (!(tau >= 0.0 && tau <= 1.0)) throw std::invalid_argument("tau outside [0,1]");

  const double pivot = scores[target_index];
  std::size_t below = 0, tied = 0, total = 0;
  for (std::size_t i = 0; i < labels.size(); ++i) {
    if (labels[i] != label) continue;
    ++total;
    if (scores[i] < pivot)
      ++below;
    else if (scores[i] == pivot)
      ++tied;
  }
  return (static_cast<double>(below) + tau * static_cast<double>(tied)) /
         static_cast<double>(total);
}

PValueSystem pvalue_system(const Dataset& training, std::span<const double> x,
                           const ConformityMeasure& A, const TauSource& taus,
                           std::uint64_t object_index) {
  const std::size_t dim = training.dimension();
  if (x.size() != dim) throw std::invalid_argument("test object dimension mismatch");
  const std::size_t l = training.size();
  const std::size_t label_count = training.label_space().size();

  std::vector<double> feats;
  feats.reserve((l + 1) * dim);
  auto fd = training.feature_data();
  feats.insert(feats.end(), fd.begin(), fd.end());
  feats.insert(feats.end(), x.begin(), x.end());
  std::vector<int> labels(training.labels().begin(), training.labels().end());
  labels.push_back(0);

  PValueSystem out(label_count);
  for (std::size_t y = 0; y < label_count; ++y) {
    labels.back() = static_cast<int>(y);
    const SequenceView extended{feats, labels, dim};
    const std::vector<double> scores = A.scores(extended);
    out[y] = label_conditional_pvalue(scores, labels, l, static_cast<int>(y),
                                      taus.tau(object_index, y));
  }
  return out;
}

std::vector<double> pvalue_matrix(const Dataset& training, const FeatureMatrix& objects,
                                  const ConformityMeasure& A, const TauSource& taus,
                                  std::uint64_t first_object_index, ExecMode mode) {
  if (objects.dimension() != training.dimension())
    throw std::invalid_argument("object dimension does not match training dimension");
  const std::size_t label_count = training.label_space().size();
  std::vector<double> matrix(objects.rows() * label_count);
  parallel_for(objects.rows(), mode, [&](std::size_t i) {
    const PValueSystem row =
        pvalue_system(training, objects.row(i), A, taus, first_object_index + i);
    std::copy(row.begin(), row.end(), matrix.begin() + static_cast<std::ptrdiff_t>(i * label_count));
  });
  return matrix;
}

PredictionSet prediction_set(const PValueSystem& p, double epsilon) {
  if (!(epsilon > 0.0 && epsilon < 1.0))
    throw std::invalid_argument("significance level must lie in (0,1)");
  PredictionSet out;
  out.epsilon = epsilon;
  for (std::size_t y = 0; y < p.size(); ++y)
    if (p[y] > epsilon) out.labels.push_back(static_cast<int>(y));
  return out;
}

Criteria criteria(const PValueSystem& p, int true_label, double epsilon) {
  if (!(epsilon > 0.0 && epsilon < 1.0))
    throw std::invalid_argument("significance level must lie in (0,1)");
  if (true_label < 0 || static_cast<std::size_t>(true_label) >= p.size())
    throw std::out_of_range("unknown true label");
  Criteria c;
  for (std::size_t y = 0; y < p.size(); ++y) {
    c.pvalue_sum += p[y];
    const bool in_set = p[y] > epsilon;
    if (in_set) c.set_size += 1.0;
    if (static_cast<int>(y) != true_label) {
      c.observed_fuzziness += p[y];
      if (in_set) c.observed_excess += 1.0;
    }
  }
  return c;
}

Criteria aggregate_criteria(std::span<const Criteria> records) {
  if (records.empty()) throw std::invalid_argument("no records to aggregate");
  Criteria mean;
  for (const Criteria& c : records) {
    mean.pvalue_sum += c.pvalue_sum;
    mean.set_size += c.set_size;
    mean.observed_fuzziness += c.observed_fuzziness;
    mean.observed_excess += c.observed_excess;
  }
  const double n = static_cast<double>(records.size());
  mean.pvalue_sum /= n;
  mean.set_size /= n;
  mean.observed_fuzziness /= n;
  mean.observed_excess /= n;
  return mean;
}

}  // namespace ccal
