#include "ccal/dataset.hpp"

#include <cerrno>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <unordered_map>

#include "ccal/rng.hpp"

namespace ccal {

namespace {

std::string trimmed(std::string_view s) {
  std::size_t b = 0, e = s.size();
  while (b < e && (s[b] == ' ' || s[b] == '\t' || s[b] == '\r')) ++b;
  while (e > b && (s[e - 1] == ' ' || s[e - 1] == '\t' || s[e - 1] == '\r')) --e;
  return std::string(s.substr(b, e - b));
}

double parse_number(const std::string& field, std::size_t line_no) {
  const char* begin = field.c_str();
  char* end = nullptr;
  errno = 0;
  const double v = std::strtod(begin, &end);
  if (end == begin || *end != '\0' || errno == ERANGE) {
    throw std::runtime_error("parse error at line " + std::to_string(line_no) +
                             ": '" + field + "' is not a number");
  }
  return v;
}

std::vector<std::string> split_fields(const std::string& line) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (true) {
    const std::size_t comma = line.find(',', start);
    if (comma == std::string::npos) {
      out.push_back(trimmed(std::string_view(line).substr(start)));
      break;
    }
    out.push_back(trimmed(std::string_view(line).substr(start, comma - start)));
    start = comma + 1;
  }
  return out;
}

bool blank(const std::string& line) {
  for (char c : line)
    if (c != ' ' && c != '\t' && c != '\r') return false;
  return true;
}

}  // namespace

LabelSpace::LabelSpace(std::vector<std::string> names) : names_(std::move(names)) {
  if (names_.empty()) throw std::invalid_argument("label space must be non-empty");
  for (std::size_t i = 0; i < names_.size(); ++i)
    for (std::size_t j = i + 1; j < names_.size(); ++j)
      if (names_[i] == names_[j])
        throw std::invalid_argument("duplicate label name '" + names_[i] + "'");
}

const std::string& LabelSpace::name(std::size_t id) const {
  if (id >= names_.size()) throw std::out_of_range("label id out of range");
  return names_[id];
}

std::optional<std::size_t> LabelSpace::find(std::string_view name) const {
  for (std::size_t i = 0; i < names_.size(); ++i)
    if (names_[i] == name) return i;
  return std::nullopt;
}

Dataset::Dataset(std::size_t dimension, LabelSpace space, std::vector<double> features,
                 std::vector<int> labels)
    : dim_(dimension),
      space_(std::move(space)),
      features_(std::move(features)),
      labels_(std::move(labels)) {
  if (dim_ == 0) throw std::invalid_argument("dataset dimension must be positive");
  if (space_.size() == 0) throw std::invalid_argument("dataset needs a label space");
  if (features_.size() != labels_.size() * dim_)
    throw std::invalid_argument("feature buffer size does not match rows * dimension");
  for (int id : labels_)
    if (id < 0 || static_cast<std::size_t>(id) >= space_.size())
      throw std::invalid_argument("label id outside label space");
}

Dataset Dataset::from_observations(std::size_t dimension, LabelSpace space,
                                   const std::vector<Observation>& observations) {
  std::vector<double> feats;
  feats.reserve(observations.size() * dimension);
  std::vector<int> labels;
  labels.reserve(observations.size());
  for (const Observation& o : observations) {
    if (o.features.size() != dimension)
      throw std::invalid_argument("observation feature length does not match dimension");
    feats.insert(feats.end(), o.features.begin(), o.features.end());
    labels.push_back(o.label);
  }
  return Dataset(dimension, std::move(space), std::move(feats), std::move(labels));
}

std::span<const double> Dataset::features(std::size_t i) const {
  if (i >= size()) throw std::out_of_range("row index out of range");
  return std::span<const double>(features_).subspan(i * dim_, dim_);
}

FeatureMatrix::FeatureMatrix(std::size_t dimension, std::vector<double> data)
    : dim_(dimension), data_(std::move(data)) {
  if (dim_ == 0) throw std::invalid_argument("feature matrix dimension must be positive");
  if (data_.size() % dim_ != 0)
    throw std::invalid_argument("feature matrix buffer not a multiple of dimension");
}

FeatureMatrix FeatureMatrix::from_dataset(const Dataset& ds) {
  return FeatureMatrix(ds.dimension(),
                       std::vector<double>(ds.feature_data().begin(), ds.feature_data().end()));
}

std::span<const double> FeatureMatrix::row(std::size_t i) const {
  if (i >= rows()) throw std::out_of_range("row index out of range");
  return std::span<const double>(data_).subspan(i * dim_, dim_);
}

Dataset load_csv(const std::string& path, bool has_header) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open '" + path + "'");

  std::vector<std::string> names;
  std::unordered_map<std::string, int> name_to_id;
  std::vector<double> feats;
  std::vector<int> labels;
  std::size_t dim = 0;

  std::string line;
  std::size_t line_no = 0;
  bool header_pending = has_header;
  while (std::getline(in, line)) {
    ++line_no;
    if (blank(line)) continue;
    if (header_pending) {
      header_pending = false;
      continue;
    }
    const std::vector<std::string> fields = split_fields(line);
    if (fields.size() < 2)
      throw std::runtime_error("format error at line " + std::to_string(line_no) +
                               ": need a label and at least one feature");
    if (dim == 0) {
      dim = fields.size() - 1;
    } else if (fields.size() != dim + 1) {
      throw std::runtime_error("ragged row at line " + std::to_string(line_no) +
                               " (expected " + std::to_string(dim + 1) + " fields, got " +
                               std::to_string(fields.size()) + ")");
    }
    const std::string& name = fields[0];
    if (name.empty())
      throw std::runtime_error("empty label at line " + std::to_string(line_no));
    auto it = name_to_id.find(name);
    int id;
    if (it == name_to_id.end()) {
      id = static_cast<int>(names.size());
      names.push_back(name);
      name_to_id.emplace(name, id);
    } else {
      id = it->second;
    }
    labels.push_back(id);
    for (std::size_t f = 1; f < fields.size(); ++f)
      feats.push_back(parse_number(fields[f], line_no));
  }
  if (labels.empty()) throw std::runtime_error("empty input: '" + path + "' has no data rows");
  return Dataset(dim, LabelSpace(std::move(names)), std::move(feats), std::move(labels));
}

void save_csv(const Dataset& ds, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open '" + path + "' for writing");
  char buf[64];
  for (std::size_t i = 0; i < ds.size(); ++i) {
    out << ds.label_space().name(static_cast<std::size_t>(ds.label(i)));
    for (double v : ds.features(i)) {
      std::snprintf(buf, sizeof buf, ",%.17g", v);
      out << buf;
    }
    out << '\n';
  }
  if (!out) throw std::runtime_error("write failure on '" + path + "'");
}

Dataset load_usps(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open '" + path + "'");

  constexpr std::size_t kDim = 256;
  std::vector<double> feats;
  std::vector<int> labels;

  std::string line;
  std::size_t line_no = 0;
  std::vector<double> row;
  while (std::getline(in, line)) {
    ++line_no;
    if (blank(line)) continue;
    row.clear();
    std::istringstream ss(line);
    double v;
    while (ss >> v) row.push_back(v);
    std::string leftover;
    if (ss >> leftover)
      throw std::runtime_error("parse error at line " + std::to_string(line_no) +
                               ": non-numeric token '" + leftover + "'");
    if (row.size() != kDim + 1)
      throw std::runtime_error("format error at line " + std::to_string(line_no) +
                               ": expected 257 numbers, got " + std::to_string(row.size()));
    const double raw = row[0];
    const double rounded = std::nearbyint(raw);
    if (std::abs(raw - rounded) > 1e-6 || rounded < 0.0 || rounded > 9.0)
      throw std::runtime_error("label error at line " + std::to_string(line_no) + ": " +
                               std::to_string(raw) + " is not a digit 0-9");
    labels.push_back(static_cast<int>(rounded));
    feats.insert(feats.end(), row.begin() + 1, row.end());
  }
  if (labels.empty()) throw std::runtime_error("empty input: '" + path + "' has no data rows");

  std::vector<std::string> digits;
  for (int d = 0; d < 10; ++d) digits.push_back(std::to_string(d));
  return Dataset(kDim, LabelSpace(std::move(digits)), std::move(feats), std::move(labels));
}

Dataset select(const Dataset& ds, std::span<const std::size_t> rows) {
  std::vector<double> feats;
  feats.reserve(rows.size() * ds.dimension());
  std::vector<int> labels;
  labels.reserve(rows.size());
  for (std::size_t r : rows) {
    auto f = ds.features(r);
    feats.insert(feats.end(), f.begin(), f.end());
    labels.push_back(ds.label(r));
  }
  return Dataset(ds.dimension(), ds.label_space(), std::move(feats), std::move(labels));
}

std::pair<Dataset, Dataset> split(const Dataset& ds, std::size_t train_size,
                                  std::uint64_t seed) {
  if (train_size > ds.size())
    throw std::out_of_range("train_size " + std::to_string(train_size) +
                            " exceeds dataset size " + std::to_string(ds.size()));
  const std::vector<std::size_t> perm = random_permutation(ds.size(), seed);
  const std::span<const std::size_t> all(perm);
  return {select(ds, all.subspan(0, train_size)), select(ds, all.subspan(train_size))};
}

Dataset concat(const std::vector<Dataset>& parts) {
  if (parts.empty()) throw std::invalid_argument("nothing to concatenate");
  const std::size_t dim = parts.front().dimension();
  std::vector<std::string> names = parts.front().label_space().names();

  std::vector<double> feats;
  std::vector<int> labels;
  for (const Dataset& p : parts) {
    if (p.dimension() != dim)
      throw std::invalid_argument("dimension mismatch while concatenating datasets");
    std::vector<int> remap(p.label_space().size());
    for (std::size_t id = 0; id < p.label_space().size(); ++id) {
      const std::string& n = p.label_space().name(id);
      std::size_t target = names.size();
      for (std::size_t k = 0; k < names.size(); ++k)
        if (names[k] == n) {
          target = k;
          break;
        }
      if (target == names.size()) names.push_back(n);
      remap[id] = static_cast<int>(target);
    }
    auto fd = p.feature_data();
    feats.insert(feats.end(), fd.begin(), fd.end());
    for (int id : p.labels()) labels.push_back(remap[static_cast<std::size_t>(id)]);
  }
  return Dataset(dim, LabelSpace(std::move(names)), std::move(feats), std::move(labels));
}

}  // namespace ccal
