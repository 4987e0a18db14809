#include "ccal/grenander.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace ccal {

AntitonicDensity fit_antitonic_density(std::span<const double> samples) {
  if (samples.empty()) throw std::invalid_argument("antitonic fit needs at least one sample");
  std::vector<double> s(samples.begin(), samples.end());
  for (double v : s)
    if (!(v >= 0.0 && v <= 1.0)) throw std::out_of_range("sample outside [0,1]");
  std::sort(s.begin(), s.end());
  const std::size_t n = s.size();

  // ECDF vertices (x, F(x)) at distinct sample values, anchored at (0, 0) and
  // (1, 1). A run of zeros contributes no vertex of its own; its count stays
  // in the cumulative total of the next vertex.
  std::vector<double> vx{0.0}, vf{0.0};
  std::size_t i = 0;
  while (i < n) {
    std::size_t j = i;
    while (j < n && s[j] == s[i]) ++j;
    if (s[i] > 0.0) {
      vx.push_back(s[i]);
      vf.push_back(static_cast<double>(j) / static_cast<double>(n));
    }
    i = j;
  }
  if (vx.back() < 1.0) {
    vx.push_back(1.0);
    vf.push_back(1.0);
  }

  // Upper (concave) hull by monotone chain; collinear middle vertices are
  // dropped, so hull slopes are strictly decreasing.
  std::vector<std::size_t> hull;
  for (std::size_t k = 0; k < vx.size(); ++k) {
    while (hull.size() >= 2) {
      const std::size_t a = hull[hull.size() - 2];
      const std::size_t b = hull.back();
      // Keep b only if it lies strictly above the chord a -> k.
      const double lhs = (vf[b] - vf[a]) * (vx[k] - vx[a]);
      const double rhs = (vf[k] - vf[a]) * (vx[b] - vx[a]);
      if (lhs > rhs) break;
      hull.pop_back();
    }
    hull.push_back(k);
  }

  AntitonicDensity g;
  g.breakpoints.reserve(hull.size());
  g.levels.reserve(hull.size() - 1);
  for (std::size_t k : hull) g.breakpoints.push_back(vx[k]);
  for (std::size_t k = 1; k < hull.size(); ++k) {
    const std::size_t a = hull[k - 1], b = hull[k];
    g.levels.push_back((vf[b] - vf[a]) / (vx[b] - vx[a]));
  }
  return g;
}

double evaluate(const AntitonicDensity& g, double p) {
  if (!(p >= 0.0 && p <= 1.0)) throw std::out_of_range("evaluation point outside [0,1]");
  if (p == 0.0) return g.levels.front();
  const auto it = std::lower_bound(g.breakpoints.begin() + 1, g.breakpoints.end(), p);
  return g.levels[static_cast<std::size_t>(it - g.breakpoints.begin()) - 1];
}

void validate(const AntitonicDensity& g) {
  if (g.breakpoints.size() < 2 || g.levels.size() + 1 != g.breakpoints.size())
    throw std::invalid_argument("inconsistent breakpoint/level counts");
  if (g.breakpoints.front() != 0.0 || g.breakpoints.back() != 1.0)
    throw std::invalid_argument("breakpoints must span [0,1]");
  double integral = 0.0;
  for (std::size_t k = 0; k < g.levels.size(); ++k) {
    if (!(g.breakpoints[k] < g.breakpoints[k + 1]))
      throw std::invalid_argument("breakpoints must be strictly increasing");
    if (!(g.levels[k] >= 0.0)) throw std::invalid_argument("levels must be non-negative");
    if (k > 0 && g.levels[k] > g.levels[k - 1])
      throw std::invalid_argument("levels must be non-increasing");
    integral += g.levels[k] * (g.breakpoints[k + 1] - g.breakpoints[k]);
  }
  if (std::abs(integral - 1.0) > 1e-12)
    throw std::invalid_argument("density does not integrate to 1");
}

}  // namespace ccal
