#include "ccal/nn_kernel.hpp"

#include <limits>
#include <stdexcept>

#include "ccal/conformity.hpp"

namespace ccal {

NnNeighborTable nn_neighbor_table(const Dataset& training, const DistanceFn& d,
                                  ExecMode mode) {
  const std::size_t n = training.size();
  NnNeighborTable table;
  table.same.assign(n, std::numeric_limits<double>::infinity());
  table.diff.assign(n, std::numeric_limits<double>::infinity());
  table.by_label.assign(training.label_space().size(), {});
  for (std::size_t i = 0; i < n; ++i)
    table.by_label[static_cast<std::size_t>(training.label(i))].push_back(
        static_cast<std::uint32_t>(i));

  parallel_for(n, mode, [&](std::size_t i) {
    const auto xi = training.features(i);
    const int yi = training.label(i);
    double nearest_same = std::numeric_limits<double>::infinity();
    double nearest_diff = std::numeric_limits<double>::infinity();
    for (std::size_t j = 0; j < n; ++j) {
      if (j == i) continue;
      const double dist = d(xi, training.features(j));
      if (training.label(j) == yi) {
        if (dist < nearest_same) nearest_same = dist;
      } else {
        if (dist < nearest_diff) nearest_diff = dist;
      }
    }
    table.same[i] = nearest_same;
    table.diff[i] = nearest_diff;
  });
  return table;
}

std::vector<double> nn_pvalue_matrix(const Dataset& training, const NnNeighborTable& table,
                                     const FeatureMatrix& objects, const DistanceFn& d,
                                     const TauSource& taus, std::uint64_t first_object_index,
                                     ExecMode mode) {
  if (objects.dimension() != training.dimension())
    throw std::invalid_argument("object dimension does not match training dimension");
  if (table.same.size() != training.size())
    throw std::invalid_argument("neighbor table does not match training sequence");

  const std::size_t n = training.size();
  const std::size_t label_count = training.label_space().size();
  std::vector<double> matrix(objects.rows() * label_count);

  parallel_for(objects.rows(), mode, [&](std::size_t obj) {
    const auto x = objects.row(obj);
    std::vector<double> dist(n);
    std::vector<double> nearest_by_label(label_count,
                                         std::numeric_limits<double>::infinity());
    for (std::size_t j = 0; j < n; ++j) {
      const double dj = d(x, training.features(j));
      dist[j] = dj;
      double& best = nearest_by_label[static_cast<std::size_t>(training.label(j))];
      if (dj < best) best = dj;
    }

    double* row = matrix.data() + obj * label_count;
    for (std::size_t y = 0; y < label_count; ++y) {
      // Score of the appended test observation (x, y).
      double nearest_other = std::numeric_limits<double>::infinity();
      for (std::size_t y2 = 0; y2 < label_count; ++y2)
        if (y2 != y && nearest_by_label[y2] < nearest_other)
          nearest_other = nearest_by_label[y2];
      const double pivot = ratio_score(nearest_other, nearest_by_label[y]);

      // Rank the pivot among the same-label training scores, each adjusted
      // for the appended observation tightening its same-label minimum.
      std::size_t below = 0, tied = 1;  // the test observation ties itself
      for (std::uint32_t j : table.by_label[y]) {
        const double same_j = dist[j] < table.same[j] ? dist[j] : table.same[j];
        const double score_j = ratio_score(table.diff[j], same_j);
        if (score_j < pivot)
          ++below;
        else if (score_j == pivot)
          ++tied;
      }
      const double total = static_cast<double>(table.by_label[y].size() + 1);
      const double tau = taus.tau(first_object_index + obj, y);
      row[y] = (static_cast<double>(below) + tau * static_cast<double>(tied)) / total;
    }
  });
  return matrix;
}

}  // namespace ccal
