#include "ccal/distance.hpp"

#include <cmath>
#include <stdexcept>

namespace ccal {

namespace {

void check_lengths(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size())
    throw std::invalid_argument("dimension mismatch: " + std::to_string(a.size()) +
                                " vs " + std::to_string(b.size()));
}

}  // namespace

// Four independent accumulators; the combine order is fixed, so results are
// identical no matter where the call happens.
double euclidean(std::span<const double> a, std::span<const double> b) {
  check_lengths(a, b);
  const std::size_t n = a.size();
  double s0 = 0.0, s1 = 0.0, s2 = 0.0, s3 = 0.0;
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const double d0 = a[i] - b[i];
    const double d1 = a[i + 1] - b[i + 1];
    const double d2 = a[i + 2] - b[i + 2];
    const double d3 = a[i + 3] - b[i + 3];
    s0 += d0 * d0;
    s1 += d1 * d1;
    s2 += d2 * d2;
    s3 += d3 * d3;
  }
  for (; i < n; ++i) {
    const double d = a[i] - b[i];
    s0 += d * d;
  }
  return std::sqrt((s0 + s1) + (s2 + s3));
}

double manhattan(std::span<const double> a, std::span<const double> b) {
  check_lengths(a, b);
  const std::size_t n = a.size();
  double s0 = 0.0, s1 = 0.0;
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    s0 += std::abs(a[i] - b[i]);
    s1 += std::abs(a[i + 1] - b[i + 1]);
  }
  if (i < n) s0 += std::abs(a[i] - b[i]);
  return s0 + s1;
}

DistanceFn distance_by_name(const std::string& name) {
  if (name == "euclidean") return DistanceFn(euclidean);
  if (name == "manhattan") return DistanceFn(manhattan);
  std::string options;
  for (const std::string& n : distance_names()) {
    if (!options.empty()) options += ", ";
    options += n;
  }
  throw std::invalid_argument("unknown distance '" + name + "' (options: " + options + ")");
}

std::vector<std::string> distance_names() { return {"euclidean", "manhattan"}; }

}  // namespace ccal
