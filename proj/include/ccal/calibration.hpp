#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "json.hpp"

#include "ccal/conformity.hpp"
#include "ccal/dataset.hpp"
#include "ccal/grenander.hpp"
#include "ccal/parallel.hpp"
#include "ccal/rng.hpp"
#include "ccal/transducer.hpp"

namespace ccal {

/// How the per-label normalizing constant is chosen: the fitted density's
/// value at 1, or the training frequency of the label.
enum class NormalizerRule { DensityAtOne, LabelFrequency };

NormalizerRule normalizer_rule_by_name(const std::string& name);
std::string to_string(NormalizerRule rule);

/// Fitted calibration state for one label. `rule` records which normalizer
/// was actually used ("density-at-one", "label-frequency", or "floor" when
/// both preferred choices were zero).
struct LabelCalibration {
  AntitonicDensity density;
  double normalizer = 1.0;
  std::string rule;
};

struct CalibrationModel {
  std::vector<LabelCalibration> per_label;
  std::size_t calibration_size = 0;
  NormalizerRule requested_rule = NormalizerRule::DensityAtOne;

  /// Lower bound applied to density evaluations (and to a doubly-degenerate
  /// normalizer) so calibrated ratios stay finite and positive.
  double density_floor() const { return 1.0 / (10.0 * static_cast<double>(calibration_size)); }
};

/// A probability measure over the labels plus the pre-normalization total it
/// was scaled down from (interesting because that total is rarely exactly 1).
struct Prediction {
  std::vector<double> probabilities;
  double raw_sum = 0.0;
};

/// Fraction of training observations carrying each label.
std::vector<double> label_fractions(const Dataset& training);

/// Builds the model from an already-computed |calibration| x |labels| p-value
/// matrix: per label, a Grenander fit of that label's column plus the
/// normalizer chosen by `rule` (falling back per label when the preferred
/// normalizer is zero).
CalibrationModel build_model_from_pvalues(std::span<const double> pvalues,
                                          std::size_t label_count,
                                          std::span<const double> training_label_fractions,
                                          NormalizerRule rule);

/// Computes the calibration p-values with the generic transducer (tau address
/// of calibration object i is first_object_index + i) and fits the model.
CalibrationModel build_model(const Dataset& training, const FeatureMatrix& calibration,
                             const ConformityMeasure& A, const TauSource& taus,
                             NormalizerRule rule, std::uint64_t first_object_index = 0,
                             ExecMode mode = ExecMode::Parallel);

/// Turns one test p-value system into a probability measure: per label the
/// unnormalized value is normalizer / max(g(p), floor), then the vector is
/// scaled to sum 1. Throws a degenerate-prediction error if everything is 0.
Prediction calibrate(const CalibrationModel& model, std::span<const double> pvalues);

/// pvalue_system + calibrate for a single test object.
Prediction predict(const CalibrationModel& model, const Dataset& training,
                   std::span<const double> x, const ConformityMeasure& A,
                   const TauSource& taus, std::uint64_t object_index);

/// Element-wise predict over a batch; object i uses tau address
/// first_object_index + i, so results are independent of scheduling.
std::vector<Prediction> predict_batch(const CalibrationModel& model, const Dataset& training,
                                      const FeatureMatrix& objects, const ConformityMeasure& A,
                                      const TauSource& taus,
                                      std::uint64_t first_object_index = 0,
                                      ExecMode mode = ExecMode::Parallel);

/// JSON export/import: {label name -> {breakpoints, levels, d, rule}} plus
/// the shared bookkeeping fields. Doubles survive the round trip exactly.
nlohmann::json model_to_json(const CalibrationModel& model, const LabelSpace& labels);
CalibrationModel model_from_json(const nlohmann::json& j, const LabelSpace& labels);

}  // namespace ccal
