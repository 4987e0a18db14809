#include "ccal/stats.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace ccal {

KsResult ks_uniform(std::vector<double> samples) {
  if (samples.empty()) throw std::invalid_argument("empty sample");
  std::sort(samples.begin(), samples.end());
  const std::size_t n = samples.size();
  const double nd = static_cast<double>(n);
  double d = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double u = samples[i];
    if (!(u >= 0.0 && u <= 1.0)) throw std::out_of_range("sample outside [0,1]");
    d = std::max(d, static_cast<double>(i + 1) / nd - u);
    d = std::max(d, u - static_cast<double>(i) / nd);
  }
  const double sqrt_n = std::sqrt(nd);
  const double lambda = (sqrt_n + 0.12 + 0.11 / sqrt_n) * d;
  double p = 0.0;
  double sign = 1.0;
  for (int j = 1; j <= 100; ++j) {
    const double term = std::exp(-2.0 * j * j * lambda * lambda);
    p += sign * term;
    sign = -sign;
    if (term < 1e-14) break;
  }
  p = std::clamp(2.0 * p, 0.0, 1.0);
  return KsResult{d, p, n};
}

std::vector<double> average_ranks(std::span<const double> values) {
  const std::size_t n = values.size();
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t i, std::size_t j) { return values[i] < values[j]; });
  std::vector<double> ranks(n, 0.0);
  std::size_t i = 0;
  while (i < n) {
    std::size_t j = i;
    while (j < n && values[order[j]] == values[order[i]]) ++j;
    const double shared = (static_cast<double>(i + 1) + static_cast<double>(j)) / 2.0;
    for (std::size_t k = i; k < j; ++k) ranks[order[k]] = shared;
    i = j;
  }
  return ranks;
}

double pearson_correlation(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size() || a.size() < 2)
    throw std::invalid_argument("need two equal-length samples of size >= 2");
  const double n = static_cast<double>(a.size());
  double ma = 0.0, mb = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    ma += a[i];
    mb += b[i];
  }
  ma /= n;
  mb /= n;
  double cov = 0.0, va = 0.0, vb = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double da = a[i] - ma, db = b[i] - mb;
    cov += da * db;
    va += da * da;
    vb += db * db;
  }
  if (va == 0.0 || vb == 0.0) throw std::invalid_argument("constant sample has no correlation");
  return cov / std::sqrt(va * vb);
}

double spearman_correlation(std::span<const double> a, std::span<const double> b) {
  const std::vector<double> ra = average_ranks(a);
  const std::vector<double> rb = average_ranks(b);
  return pearson_correlation(ra, rb);
}

double quantile_sorted(std::span<const double> sorted, double q) {
  if (sorted.empty()) throw std::invalid_argument("empty sample");
  if (!(q >= 0.0 && q <= 1.0)) throw std::out_of_range("quantile outside [0,1]");
  const double h = q * static_cast<double>(sorted.size() - 1);
  const std::size_t lo = static_cast<std::size_t>(h);
  if (lo + 1 >= sorted.size()) return sorted.back();
  const double frac = h - static_cast<double>(lo);
  return sorted[lo] + frac * (sorted[lo + 1] - sorted[lo]);
}

}  // namespace ccal
