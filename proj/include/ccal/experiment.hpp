#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "json.hpp"

#include "ccal/calibration.hpp"
#include "ccal/parallel.hpp"

namespace ccal {

inline constexpr int kReportSchemaVersion = 1;

/// Fixed stream ids separating the independent tau draws (and any other
/// seeded randomness) derived from one experiment seed.
namespace streams {
inline constexpr std::uint64_t kTauCalibration = 0x0C5A1CA1;
inline constexpr std::uint64_t kTauTest = 0x0C5A1CA2;
inline constexpr std::uint64_t kSpaces = 0x0C5A1CA3;
inline constexpr std::uint64_t kChallengers = 0x0C5A1CA4;
}  // namespace streams

/// Everything a run depends on. Reports are a pure function of this plus the
/// input files; threads/mode are deliberately not echoed into reports because
/// they cannot change any output byte.
struct ExperimentConfig {
  std::vector<std::string> data_paths;
  std::string format = "csv";  // csv | usps
  bool csv_header = false;
  std::size_t train_size = 0;
  std::int64_t seed = 0;
  std::string distance = "euclidean";
  std::string d_rule = "grenander";  // grenander | label-frequency
  std::vector<double> epsilons = {0.05, 0.1, 0.2};
  std::vector<std::string> calibration_paths;  // empty: test doubles as calibration
  bool emit_predictions = false;
  int threads = 0;
  ExecMode mode = ExecMode::Parallel;
};

struct OptimalityConfig {
  std::size_t objects = 4;
  std::size_t labels = 2;
  std::size_t spaces = 20;
  std::size_t trials = 1000;
  std::int64_t seed = 0;
  std::vector<double> epsilons = {0.05, 0.1, 0.2, 0.5};
  int threads = 0;
  ExecMode mode = ExecMode::Parallel;
};

/// Full pipeline: load, split, calibrate on the calibration objects (the test
/// objects by default), predict every test object, and report losses, mean
/// criteria per significance level, the fitted per-label densities, and the
/// spread of pre-normalization probability sums.
nlohmann::json run_experiment(const ExperimentConfig& cfg);

/// The raw per-test-object p-value matrix plus a per-label uniformity check
/// of the true label's p-values.
nlohmann::json pvalues_report(const ExperimentConfig& cfg);

/// Optimality margins of the conditional-probability conformity measure over
/// `spaces` random finite distributions; "pass" is false if any challenger
/// beats it beyond 1e-9 or any monotone transform fails to tie within 1e-12.
nlohmann::json optimality_report(const OptimalityConfig& cfg);

/// Losses of externally supplied predictions (array of per-label probability
/// rows) against the test part of the configured split.
nlohmann::json metrics_report(const ExperimentConfig& cfg, const nlohmann::json& predictions);

/// Loads and concatenates the configured data files.
Dataset load_all(const std::vector<std::string>& paths, const std::string& format,
                 bool csv_header);

}  // namespace ccal
