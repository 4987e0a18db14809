#include "ccal/idealized.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numeric>
#include <stdexcept>

#include "ccal/rng.hpp"

namespace ccal {

FiniteDistribution::FiniteDistribution(std::size_t objects, std::size_t labels,
                                       std::vector<double> table)
    : nx_(objects), ny_(labels), table_(std::move(table)) {
  if (nx_ == 0 || ny_ == 0) throw std::invalid_argument("empty observation space");
  if (table_.size() != nx_ * ny_)
    throw std::invalid_argument("probability table has wrong size");
  double sum = 0.0;
  for (double v : table_) {
    if (!(v > 0.0)) throw std::invalid_argument("every cell mass must be positive");
    sum += v;
  }
  if (std::abs(sum - 1.0) > 1e-12)
    throw std::invalid_argument("probability table must sum to 1");
  qx_.assign(nx_, 0.0);
  qy_.assign(ny_, 0.0);
  for (std::size_t x = 0; x < nx_; ++x)
    for (std::size_t y = 0; y < ny_; ++y) {
      qx_[x] += mass(x, y);
      qy_[y] += mass(x, y);
    }
}

namespace {

void check_space(const FiniteDistribution& q, const IdealizedConformityMeasure& a) {
  if (a.objects != q.objects() || a.labels != q.labels() ||
      a.score.size() != q.objects() * q.labels())
    throw std::invalid_argument("conformity measure does not match the observation space");
}

// Per-cell decomposition of the p-value: p = below + tau * tied, where
// `below` is the same-label mass scoring strictly less and `tied` the mass
// scoring equal (both normalized by the label marginal, so tied > 0 always).
struct PvalueTerms {
  std::vector<double> below;  // x-major
  std::vector<double> tied;
};

PvalueTerms pvalue_terms(const FiniteDistribution& q, const IdealizedConformityMeasure& a) {
  const std::size_t nx = q.objects(), ny = q.labels();
  PvalueTerms t;
  t.below.assign(nx * ny, 0.0);
  t.tied.assign(nx * ny, 0.0);

  std::vector<std::size_t> order(nx);
  for (std::size_t y = 0; y < ny; ++y) {
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(), [&](std::size_t i, std::size_t j) {
      return a.at(i, y) < a.at(j, y);
    });
    const double marginal = q.label_marginal(y);
    std::size_t run = 0;
    double mass_before = 0.0;
    while (run < nx) {
      std::size_t end = run;
      double run_mass = 0.0;
      while (end < nx && a.at(order[end], y) == a.at(order[run], y)) {
        run_mass += q.mass(order[end], y);
        ++end;
      }
      for (std::size_t k = run; k < end; ++k) {
        t.below[order[k] * ny + y] = mass_before / marginal;
        t.tied[order[k] * ny + y] = run_mass / marginal;
      }
      mass_before += run_mass;
      run = end;
    }
  }
  return t;
}

double exceedance(double below, double tied, double epsilon) {
  if (tied <= 0.0) return below > epsilon ? 1.0 : 0.0;
  const double pr = (below + tied - epsilon) / tied;
  return std::clamp(pr, 0.0, 1.0);
}

}  // namespace

double idealized_pvalue(const FiniteDistribution& q, const IdealizedConformityMeasure& a,
                        std::size_t x, std::size_t y, double tau) {
  check_space(q, a);
  if (x >= q.objects() || y >= q.labels())
    throw std::out_of_range("unknown object or label");
  if (!(tau >= 0.0 && tau <= 1.0)) throw std::invalid_argument("tau outside [0,1]");
  const double pivot = a.at(x, y);
  double below = 0.0, tied = 0.0;
  for (std::size_t x2 = 0; x2 < q.objects(); ++x2) {
    const double s = a.at(x2, y);
    if (s < pivot)
      below += q.mass(x2, y);
    else if (s == pivot)
      tied += q.mass(x2, y);
  }
  return (below + tau * tied) / q.label_marginal(y);
}

IdealizedConformityMeasure cp_measure(const FiniteDistribution& q) {
  IdealizedConformityMeasure a;
  a.objects = q.objects();
  a.labels = q.labels();
  a.score.resize(q.objects() * q.labels());
  for (std::size_t x = 0; x < q.objects(); ++x)
    for (std::size_t y = 0; y < q.labels(); ++y)
      a.score[x * q.labels() + y] = q.mass(x, y) / q.object_marginal(x);
  return a;
}

bool is_refinement(const IdealizedConformityMeasure& a, const IdealizedConformityMeasure& b) {
  if (a.objects != b.objects || a.labels != b.labels)
    throw std::invalid_argument("conformity measures live on different spaces");
  for (std::size_t y = 0; y < a.labels; ++y)
    for (std::size_t x1 = 0; x1 < a.objects; ++x1)
      for (std::size_t x2 = 0; x2 < a.objects; ++x2)
        if (b.at(x1, y) < b.at(x2, y) && !(a.at(x1, y) < a.at(x2, y))) return false;
  return true;
}

CriteriaProfile expected_criteria_profile(const FiniteDistribution& q,
                                          const IdealizedConformityMeasure& a,
                                          std::span<const double> epsilons) {
  check_space(q, a);
  for (double e : epsilons)
    if (!(e > 0.0 && e < 1.0))
      throw std::invalid_argument("significance level must lie in (0,1)");

  const std::size_t nx = q.objects(), ny = q.labels();
  const PvalueTerms t = pvalue_terms(q, a);

  CriteriaProfile prof;
  prof.set_size.assign(epsilons.size(), 0.0);
  prof.observed_excess.assign(epsilons.size(), 0.0);

  for (std::size_t x = 0; x < nx; ++x) {
    double mean_row = 0.0;
    for (std::size_t y = 0; y < ny; ++y)
      mean_row += t.below[x * ny + y] + 0.5 * t.tied[x * ny + y];
    prof.pvalue_sum += q.object_marginal(x) * mean_row;
    // observed fuzziness drops the true label's own p-value, weighted by Q
    for (std::size_t y = 0; y < ny; ++y) {
      const double own = t.below[x * ny + y] + 0.5 * t.tied[x * ny + y];
      prof.observed_fuzziness += q.mass(x, y) * (mean_row - own);
    }
    for (std::size_t e = 0; e < epsilons.size(); ++e) {
      double row_pr = 0.0;
      for (std::size_t y = 0; y < ny; ++y)
        row_pr += exceedance(t.below[x * ny + y], t.tied[x * ny + y], epsilons[e]);
      prof.set_size[e] += q.object_marginal(x) * row_pr;
      for (std::size_t y = 0; y < ny; ++y) {
        const double own = exceedance(t.below[x * ny + y], t.tied[x * ny + y], epsilons[e]);
        prof.observed_excess[e] += q.mass(x, y) * (row_pr - own);
      }
    }
  }
  return prof;
}

Criteria expected_criteria(const FiniteDistribution& q, const IdealizedConformityMeasure& a,
                           double epsilon) {
  const double eps[1] = {epsilon};
  const CriteriaProfile prof = expected_criteria_profile(q, a, eps);
  Criteria c;
  c.pvalue_sum = prof.pvalue_sum;
  c.observed_fuzziness = prof.observed_fuzziness;
  c.set_size = prof.set_size[0];
  c.observed_excess = prof.observed_excess[0];
  return c;
}

namespace {

using Transform = double (*)(double);

// Strictly increasing maps on [0, 1]; applying any of them per label leaves
// every score order (and tie) unchanged.
constexpr Transform kMonotoneFamily[] = {
    [](double t) { return t; },
    [](double t) { return 2.0 * t + 7.0; },
    [](double t) { return t * t * t; },
    [](double t) { return std::exp(t); },
    [](double t) { return t / (1.0 + t); },
    [](double t) { return std::sqrt(t); },
};
constexpr std::size_t kFamilySize = sizeof(kMonotoneFamily) / sizeof(kMonotoneFamily[0]);

void take_min(CriteriaProfile& best, const CriteriaProfile& cand) {
  best.pvalue_sum = std::min(best.pvalue_sum, cand.pvalue_sum);
  best.observed_fuzziness = std::min(best.observed_fuzziness, cand.observed_fuzziness);
  for (std::size_t e = 0; e < best.set_size.size(); ++e) {
    best.set_size[e] = std::min(best.set_size[e], cand.set_size[e]);
    best.observed_excess[e] = std::min(best.observed_excess[e], cand.observed_excess[e]);
  }
}

double profile_gap(const CriteriaProfile& a, const CriteriaProfile& b) {
  double gap = std::abs(a.pvalue_sum - b.pvalue_sum);
  gap = std::max(gap, std::abs(a.observed_fuzziness - b.observed_fuzziness));
  for (std::size_t e = 0; e < a.set_size.size(); ++e) {
    gap = std::max(gap, std::abs(a.set_size[e] - b.set_size[e]));
    gap = std::max(gap, std::abs(a.observed_excess[e] - b.observed_excess[e]));
  }
  return gap;
}

double worst_violation(const CriteriaProfile& cp, const CriteriaProfile& best) {
  double v = cp.pvalue_sum - best.pvalue_sum;
  v = std::max(v, cp.observed_fuzziness - best.observed_fuzziness);
  for (std::size_t e = 0; e < cp.set_size.size(); ++e) {
    v = std::max(v, cp.set_size[e] - best.set_size[e]);
    v = std::max(v, cp.observed_excess[e] - best.observed_excess[e]);
  }
  return v;
}

}  // namespace

OptimalityReport verify_cp_optimality(const FiniteDistribution& q, std::size_t trials,
                                      std::uint64_t seed, std::span<const double> epsilons,
                                      ExecMode mode) {
  if (trials == 0) throw std::invalid_argument("need at least one random challenger");
  const std::size_t nx = q.objects(), ny = q.labels();
  const IdealizedConformityMeasure cp = cp_measure(q);

  OptimalityReport report;
  report.epsilons.assign(epsilons.begin(), epsilons.end());
  report.cp = expected_criteria_profile(q, cp, epsilons);

  // Challengers: seeded iid-uniform tables, then fixed order inversions of
  // the conditional-probability scores (one per label, plus all at once).
  const std::size_t inversions = ny + 1;
  const std::size_t total = trials + inversions;
  std::vector<CriteriaProfile> profiles(total);
  parallel_for(total, mode, [&](std::size_t t) {
    IdealizedConformityMeasure cand;
    cand.objects = nx;
    cand.labels = ny;
    cand.score.resize(nx * ny);
    if (t < trials) {
      for (std::size_t cell = 0; cell < nx * ny; ++cell) {
        const std::uint64_t h = mix64(mix64(seed + 0x9E3779B97F4A7C15ull * (t + 1)) +
                                      0x9E3779B97F4A7C15ull * (cell + 1));
        cand.score[cell] = (static_cast<double>(h >> 11) + 0.5) * 0x1.0p-53;
      }
    } else {
      const std::size_t flip = t - trials;  // label to invert; ny means all
      cand.score = cp.score;
      for (std::size_t x = 0; x < nx; ++x)
        for (std::size_t y = 0; y < ny; ++y)
          if (flip == ny || y == flip) cand.score[x * ny + y] = -cp.at(x, y);
    }
    profiles[t] = expected_criteria_profile(q, cand, epsilons);
  });

  report.best_challenger = profiles.front();
  for (std::size_t t = 1; t < total; ++t) take_min(report.best_challenger, profiles[t]);
  report.challenger_count = total;
  report.max_violation = worst_violation(report.cp, report.best_challenger);

  // Refinements: every per-label assignment of the monotone family (capped).
  std::size_t combos = 1;
  for (std::size_t y = 0; y < ny; ++y) {
    combos *= kFamilySize;
    if (combos > 128) {
      combos = 128;
      break;
    }
  }
  for (std::size_t c = 0; c < combos; ++c) {
    IdealizedConformityMeasure refined;
    refined.objects = nx;
    refined.labels = ny;
    refined.score.resize(nx * ny);
    std::size_t code = c;
    for (std::size_t y = 0; y < ny; ++y) {
      const Transform f = kMonotoneFamily[code % kFamilySize];
      code /= kFamilySize;
      for (std::size_t x = 0; x < nx; ++x) refined.score[x * ny + y] = f(cp.at(x, y));
    }
    const CriteriaProfile prof = expected_criteria_profile(q, refined, epsilons);
    report.refinement_max_gap = std::max(report.refinement_max_gap, profile_gap(prof, report.cp));
  }
  report.refinement_count = combos;
  return report;
}

nlohmann::json OptimalityReport::to_json() const {
  nlohmann::json criteria = nlohmann::json::object();
  auto entry = [](double cp_value, double best) {
    return nlohmann::json{{"cp_value", cp_value},
                          {"best_challenger_value", best},
                          {"margin", best - cp_value}};
  };
  criteria["pvalue_sum"] = entry(cp.pvalue_sum, best_challenger.pvalue_sum);
  criteria["observed_fuzziness"] =
      entry(cp.observed_fuzziness, best_challenger.observed_fuzziness);
  for (std::size_t e = 0; e < epsilons.size(); ++e) {
    char key[64];
    std::snprintf(key, sizeof key, "set_size@%g", epsilons[e]);
    criteria[key] = entry(cp.set_size[e], best_challenger.set_size[e]);
    std::snprintf(key, sizeof key, "observed_excess@%g", epsilons[e]);
    criteria[key] = entry(cp.observed_excess[e], best_challenger.observed_excess[e]);
  }
  return {{"criteria", criteria},
          {"challenger_count", challenger_count},
          {"refinement_count", refinement_count},
          {"max_violation", max_violation},
          {"refinement_max_gap", refinement_max_gap},
          {"pass", passes()}};
}

FiniteDistribution random_distribution(std::size_t objects, std::size_t labels,
                                       std::uint64_t seed) {
  const std::size_t cells = objects * labels;
  SplitMix64 gen(seed);
  std::vector<double> table(cells);
  double sum = 0.0;
  for (double& v : table) {
    v = gen.next_open_unit();
    sum += v;
  }
  // Mix with the flat table so every cell keeps at least 0.1 / cells mass.
  double total = 0.0;
  for (double& v : table) {
    v = 0.9 * (v / sum) + 0.1 / static_cast<double>(cells);
    total += v;
  }
  for (double& v : table) v /= total;
  return FiniteDistribution(objects, labels, std::move(table));
}

}  // namespace ccal
