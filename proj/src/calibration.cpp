#include "ccal/calibration.hpp"

#include <algorithm>
#include <stdexcept>

namespace ccal {

NormalizerRule normalizer_rule_by_name(const std::string& name) {
  if (name == "grenander" || name == "density-at-one") return NormalizerRule::DensityAtOne;
  if (name == "label-frequency") return NormalizerRule::LabelFrequency;
  throw std::invalid_argument("unknown normalizer rule '" + name +
                              "' (options: grenander, label-frequency)");
}

std::string to_string(NormalizerRule rule) {
  return rule == NormalizerRule::DensityAtOne ? "grenander" : "label-frequency";
}

std::vector<double> label_fractions(const Dataset& training) {
  std::vector<double> counts(training.label_space().size(), 0.0);
  for (int id : training.labels()) counts[static_cast<std::size_t>(id)] += 1.0;
  if (training.size() > 0)
    for (double& c : counts) c /= static_cast<double>(training.size());
  return counts;
}

CalibrationModel build_model_from_pvalues(std::span<const double> pvalues,
                                          std::size_t label_count,
                                          std::span<const double> training_label_fractions,
                                          NormalizerRule rule) {
  if (label_count == 0) throw std::invalid_argument("label count must be positive");
  if (pvalues.empty() || pvalues.size() % label_count != 0)
    throw std::invalid_argument("p-value matrix is empty or not |objects| x |labels|");
  if (training_label_fractions.size() != label_count)
    throw std::invalid_argument("label fraction vector has wrong length");
  const std::size_t k = pvalues.size() / label_count;

  CalibrationModel model;
  model.calibration_size = k;
  model.requested_rule = rule;
  model.per_label.resize(label_count);
  const double floor = model.density_floor();

  std::vector<double> column(k);
  for (std::size_t y = 0; y < label_count; ++y) {
    for (std::size_t i = 0; i < k; ++i) column[i] = pvalues[i * label_count + y];
    LabelCalibration& lc = model.per_label[y];
    lc.density = fit_antitonic_density(column);

    double normalizer = 0.0;
    std::string used;
    if (rule == NormalizerRule::DensityAtOne) {
      normalizer = lc.density.at_one();
      used = "density-at-one";
      if (normalizer <= 0.0) {
        normalizer = training_label_fractions[y];
        used = "label-frequency";
      }
    } else {
      normalizer = training_label_fractions[y];
      used = "label-frequency";
    }
    if (normalizer <= 0.0) {
      normalizer = floor;
      used = "floor";
    }
    lc.normalizer = normalizer;
    lc.rule = used;
  }
  return model;
}

CalibrationModel build_model(const Dataset& training, const FeatureMatrix& calibration,
                             const ConformityMeasure& A, const TauSource& taus,
                             NormalizerRule rule, std::uint64_t first_object_index,
                             ExecMode mode) {
  if (training.size() == 0) throw std::invalid_argument("training sequence is empty");
  if (calibration.rows() == 0) throw std::invalid_argument("calibration sequence is empty");
  const std::vector<double> matrix =
      pvalue_matrix(training, calibration, A, taus, first_object_index, mode);
  const std::vector<double> fractions = label_fractions(training);
  return build_model_from_pvalues(matrix, training.label_space().size(), fractions, rule);
}

Prediction calibrate(const CalibrationModel& model, std::span<const double> pvalues) {
  const std::size_t m = model.per_label.size();
  if (pvalues.size() != m)
    throw std::invalid_argument("p-value system size does not match model");
  const double floor = model.density_floor();

  Prediction out;
  out.probabilities.resize(m);
  double sum = 0.0;
  for (std::size_t y = 0; y < m; ++y) {
    const LabelCalibration& lc = model.per_label[y];
    const double g = std::max(evaluate(lc.density, pvalues[y]), floor);
    const double raw = lc.normalizer / g;
    out.probabilities[y] = raw;
    sum += raw;
  }
  if (!(sum > 0.0))
    throw std::runtime_error("degenerate prediction: every calibrated value is zero");
  out.raw_sum = sum;
  for (double& v : out.probabilities) v /= sum;
  return out;
}

Prediction predict(const CalibrationModel& model, const Dataset& training,
                   std::span<const double> x, const ConformityMeasure& A,
                   const TauSource& taus, std::uint64_t object_index) {
  return calibrate(model, pvalue_system(training, x, A, taus, object_index));
}

std::vector<Prediction> predict_batch(const CalibrationModel& model, const Dataset& training,
                                      const FeatureMatrix& objects, const ConformityMeasure& A,
                                      const TauSource& taus, std::uint64_t first_object_index,
                                      ExecMode mode) {
  std::vector<Prediction> out(objects.rows());
  parallel_for(objects.rows(), mode, [&](std::size_t i) {
    out[i] = predict(model, training, objects.row(i), A, taus, first_object_index + i);
  });
  return out;
}

nlohmann::json model_to_json(const CalibrationModel& model, const LabelSpace& labels) {
  if (labels.size() != model.per_label.size())
    throw std::invalid_argument("label space does not match model");
  nlohmann::json per_label = nlohmann::json::object();
  for (std::size_t y = 0; y < model.per_label.size(); ++y) {
    const LabelCalibration& lc = model.per_label[y];
    per_label[labels.name(y)] = {{"breakpoints", lc.density.breakpoints},
                                 {"levels", lc.density.levels},
                                 {"d", lc.normalizer},
                                 {"rule", lc.rule}};
  }
  return {{"calibration_size", model.calibration_size},
          {"requested_rule", to_string(model.requested_rule)},
          {"labels", per_label}};
}

CalibrationModel model_from_json(const nlohmann::json& j, const LabelSpace& labels) {
  CalibrationModel model;
  model.calibration_size = j.at("calibration_size").get<std::size_t>();
  model.requested_rule = normalizer_rule_by_name(j.at("requested_rule").get<std::string>());
  if (model.calibration_size == 0)
    throw std::invalid_argument("calibration size must be positive");
  model.per_label.resize(labels.size());
  const nlohmann::json& per_label = j.at("labels");
  for (std::size_t y = 0; y < labels.size(); ++y) {
    const nlohmann::json& entry = per_label.at(labels.name(y));
    LabelCalibration& lc = model.per_label[y];
    lc.density.breakpoints = entry.at("breakpoints").get<std::vector<double>>();
    lc.density.levels = entry.at("levels").get<std::vector<double>>();
    validate(lc.density);
    lc.normalizer = entry.at("d").get<double>();
    lc.rule = entry.at("rule").get<std::string>();
    if (!(lc.normalizer > 0.0))
      throw std::invalid_argument("normalizer for label '" + labels.name(y) +
                                  "' must be positive");
  }
  return model;
}

}  // namespace ccal
