#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace ccal {

/// One labelled observation: a feature vector plus a label id into the
/// owning dataset's label space.
struct Observation {
  std::vector<double> features;
  int label = 0;
};

/// Ordered set of distinct label names; the label id of an observation is an
/// index into this list.
class LabelSpace {
 public:
  LabelSpace() = default;
  explicit LabelSpace(std::vector<std::string> names);

  std::size_t size() const { return names_.size(); }
  const std::string& name(std::size_t id) const;
  const std::vector<std::string>& names() const { return names_; }
  std::optional<std::size_t> find(std::string_view name) const;

  bool operator==(const LabelSpace&) const = default;

 private:
  std::vector<std::string> names_;
};

/// Contiguous view over a finite observation sequence; the unit the
/// conformity measures score. Row i occupies features[i*dim, (i+1)*dim).
struct SequenceView {
  std::span<const double> features;
  std::span<const int> labels;
  std::size_t dim = 0;

  std::size_t size() const { return labels.size(); }
  std::span<const double> row(std::size_t i) const { return features.subspan(i * dim, dim); }
};

/// Immutable labelled dataset with a flat row-major feature store. Safe to
/// share across threads once constructed.
class Dataset {
 public:
  Dataset(std::size_t dimension, LabelSpace space, std::vector<double> features,
          std::vector<int> labels);

  static Dataset from_observations(std::size_t dimension, LabelSpace space,
                                   const std::vector<Observation>& observations);

  std::size_t size() const { return labels_.size(); }
  std::size_t dimension() const { return dim_; }
  const LabelSpace& label_space() const { return space_; }

  std::span<const double> features(std::size_t i) const;
  int label(std::size_t i) const { return labels_[i]; }
  std::span<const int> labels() const { return labels_; }
  std::span<const double> feature_data() const { return features_; }

  SequenceView view() const { return SequenceView{features_, labels_, dim_}; }

 private:
  std::size_t dim_;
  LabelSpace space_;
  std::vector<double> features_;
  std::vector<int> labels_;
};

/// Unlabelled feature rows (calibration and test objects).
class FeatureMatrix {
 public:
  FeatureMatrix(std::size_t dimension, std::vector<double> data);

  static FeatureMatrix from_dataset(const Dataset& ds);

  std::size_t rows() const { return data_.size() / dim_; }
  std::size_t dimension() const { return dim_; }
  bool empty() const { return data_.empty(); }
  std::span<const double> row(std::size_t i) const;
  std::span<const double> data() const { return data_; }

 private:
  std::size_t dim_;
  std::vector<double> data_;
};

/// Reads `label,f1,...,fd` rows; label names are collected in first-appearance
/// order. Throws on ragged rows (with the line number), non-numeric features,
/// and empty input.
Dataset load_csv(const std::string& path, bool has_header);

/// Writes rows as `label,f1,...,fd` with 17 significant digits, so
/// load_csv(save_csv(ds)) reproduces every feature bit-for-bit.
void save_csv(const Dataset& ds, const std::string& path);

/// Reads the plain-text digits format: one observation per line, a real-valued
/// label (rounded to an integer digit 0-9, tolerance 1e-6) followed by 256
/// reals. The label space is fixed to "0".."9".
Dataset load_usps(const std::string& path);

/// New dataset holding the given rows (in order) of `ds`.
Dataset select(const Dataset& ds, std::span<const std::size_t> rows);

/// Splits into (training, test) by a seeded Fisher-Yates permutation over
/// SplitMix64: the first train_size permuted rows form the training part.
/// Both parts share the full label space and dimension.
std::pair<Dataset, Dataset> split(const Dataset& ds, std::size_t train_size,
                                  std::uint64_t seed);

/// Concatenates datasets of equal dimension, merging label spaces by name
/// (later datasets' label ids are remapped).
Dataset concat(const std::vector<Dataset>& parts);

}  // namespace ccal
