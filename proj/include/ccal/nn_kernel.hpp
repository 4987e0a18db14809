#pragma once

#include <cstdint>
#include <vector>

#include "ccal/dataset.hpp"
#include "ccal/distance.hpp"
#include "ccal/parallel.hpp"
#include "ccal/rng.hpp"

namespace ccal {

/// Per-training-point nearest-neighbour distances, split by label agreement.
/// +inf where no candidate exists. Appending one test observation to the
/// sequence can only tighten these minima, which is what makes the batched
/// p-value kernel incremental.
struct NnNeighborTable {
  std::vector<double> same;                           // nearest same-label other
  std::vector<double> diff;                           // nearest different-label
  std::vector<std::vector<std::uint32_t>> by_label;   // training rows grouped by label
};

NnNeighborTable nn_neighbor_table(const Dataset& training, const DistanceFn& d,
                                  ExecMode mode = ExecMode::Parallel);

/// Row-major |objects| x |labels| matrix of randomized p-values for the
/// nearest-neighbour ratio conformity measure. Object i draws its taus at
/// address first_object_index + i. Matches transducer::pvalue_matrix with
/// NnRatioConformity bit-for-bit while avoiding the quadratic rescan per
/// object.
std::vector<double> nn_pvalue_matrix(const Dataset& training, const NnNeighborTable& table,
                                     const FeatureMatrix& objects, const DistanceFn& d,
                                     const TauSource& taus,
                                     std::uint64_t first_object_index = 0,
                                     ExecMode mode = ExecMode::Parallel);

}  // namespace ccal
