#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "ccal/conformity.hpp"
#include "ccal/dataset.hpp"
#include "ccal/parallel.hpp"
#include "ccal/rng.hpp"

namespace ccal {

/// One randomized p-value per label id, each in (0, 1] when tau is in (0, 1].
using PValueSystem = std::vector<double>;

/// Labels whose p-value exceeds the significance level.
struct PredictionSet {
  double epsilon = 0.0;
  std::vector<int> labels;  // ascending

  bool contains(int label) const;
  std::size_t size() const { return labels.size(); }
};

/// The four per-observation efficiency criteria (smaller is better).
struct Criteria {
  double pvalue_sum = 0.0;           // sum of all p-values
  double set_size = 0.0;             // |prediction set| at epsilon
  double observed_fuzziness = 0.0;   // sum of false-label p-values
  double observed_excess = 0.0;      // false labels inside the set
};

/// Randomized rank of the target's score among same-label entries:
///   (#{y_i = y, a_i < a_t} + tau * #{y_i = y, a_i = a_t}) / #{y_i = y},
/// counting over the whole sequence including the target itself, so the
/// denominator is at least 1 and the result is positive for tau > 0.
/// Ties are exact floating-point equality.
double label_conditional_pvalue(std::span<const double> scores, std::span<const int> labels,
                                std::size_t target_index, int label, double tau);

/// p-value for every candidate label of test object x against the training
/// sequence: scores the extended sequence (training..., (x, y)) with A and
/// ranks the last element. tau is drawn per (object_index, label) from `taus`.
/// Works for empty training (every p-value becomes its tau).
PValueSystem pvalue_system(const Dataset& training, std::span<const double> x,
                           const ConformityMeasure& A, const TauSource& taus,
                           std::uint64_t object_index);

/// Row-major |objects| x |labels| p-value matrix via pvalue_system per row.
/// Object i uses tau address first_object_index + i. This is the generic
/// reference path; see nn_kernel.hpp for the fast equivalent.
std::vector<double> pvalue_matrix(const Dataset& training, const FeatureMatrix& objects,
                                  const ConformityMeasure& A, const TauSource& taus,
                                  std::uint64_t first_object_index = 0,
                                  ExecMode mode = ExecMode::Parallel);

PredictionSet prediction_set(const PValueSystem& p, double epsilon);

Criteria criteria(const PValueSystem& p, int true_label, double epsilon);

/// Arithmetic mean of each criterion; errors on an empty list.
Criteria aggregate_criteria(std::span<const Criteria> records);

}  // namespace ccal
