#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "json.hpp"

#include "ccal/parallel.hpp"
#include "ccal/transducer.hpp"

namespace ccal {

/// Explicit joint distribution over a small finite object x label space.
/// Every cell mass is strictly positive and the table sums to 1 (1e-12).
class FiniteDistribution {
 public:
  FiniteDistribution(std::size_t objects, std::size_t labels, std::vector<double> table);

  std::size_t objects() const { return nx_; }
  std::size_t labels() const { return ny_; }
  double mass(std::size_t x, std::size_t y) const { return table_[x * ny_ + y]; }
  double object_marginal(std::size_t x) const { return qx_[x]; }
  double label_marginal(std::size_t y) const { return qy_[y]; }

 private:
  std::size_t nx_, ny_;
  std::vector<double> table_;
  std::vector<double> qx_, qy_;
};

/// Conformity scores on the whole finite space, one per (object, label).
struct IdealizedConformityMeasure {
  std::size_t objects = 0, labels = 0;
  std::vector<double> score;  // x-major

  double at(std::size_t x, std::size_t y) const { return score[x * labels + y]; }
};

/// Randomized p-value of (x, y): the Q-mass of same-label cells scoring below
/// (x, y) plus tau times the mass of ties, normalized by the label marginal.
double idealized_pvalue(const FiniteDistribution& q, const IdealizedConformityMeasure& a,
                        std::size_t x, std::size_t y, double tau);

/// Scores (x, y) by the conditional probability of y given x.
IdealizedConformityMeasure cp_measure(const FiniteDistribution& q);

/// True iff every strict per-label order of b is preserved by a:
/// b(x1,y) < b(x2,y) implies a(x1,y) < a(x2,y).
bool is_refinement(const IdealizedConformityMeasure& a, const IdealizedConformityMeasure& b);

/// Exact expectations of the four criteria under (x or (x,y)) ~ Q and
/// tau ~ U(0,1). The tau integral is closed-form: a p-value is affine in tau,
/// so its mean adds half the tie mass and its exceedance probability is a
/// clamped linear ramp.
Criteria expected_criteria(const FiniteDistribution& q, const IdealizedConformityMeasure& a,
                           double epsilon);

/// Same, batched over a significance grid (pvalue_sum/observed_fuzziness are
/// epsilon-free; set_size/observed_excess get one entry per epsilon).
struct CriteriaProfile {
  double pvalue_sum = 0.0;
  double observed_fuzziness = 0.0;
  std::vector<double> set_size;
  std::vector<double> observed_excess;
};

CriteriaProfile expected_criteria_profile(const FiniteDistribution& q,
                                          const IdealizedConformityMeasure& a,
                                          std::span<const double> epsilons);

/// Outcome of the optimality check: the conditional-probability measure's
/// exact criteria against the best of `trials` random challengers (plus fixed
/// adversarial order inversions), and the worst deviation of the monotone
/// per-label transforms that must tie it exactly.
struct OptimalityReport {
  std::vector<double> epsilons;
  CriteriaProfile cp;
  CriteriaProfile best_challenger;
  std::size_t challenger_count = 0;
  std::size_t refinement_count = 0;
  double max_violation = 0.0;       // max over criteria of cp - best challenger
  double refinement_max_gap = 0.0;  // max |refinement - cp| over all criteria

  bool passes(double optimality_tol = 1e-9, double tie_tol = 1e-12) const {
    return max_violation <= optimality_tol && refinement_max_gap <= tie_tol;
  }

  nlohmann::json to_json() const;
};

/// Evaluates every challenger exactly and reports margins. Challengers are
/// `trials` seeded iid-uniform score tables plus per-label and whole-table
/// order inversions of the conditional-probability measure; the tie set is a
/// fixed family of strictly increasing per-label transforms of it.
OptimalityReport verify_cp_optimality(const FiniteDistribution& q, std::size_t trials,
                                      std::uint64_t seed, std::span<const double> epsilons,
                                      ExecMode mode = ExecMode::Parallel);

/// Seeded random distribution with every cell mass at least 0.1 / (nx * ny)
/// (a nine-to-one mix of a normalized uniform draw with the flat table).
FiniteDistribution random_distribution(std::size_t objects, std::size_t labels,
                                       std::uint64_t seed);

}  // namespace ccal
