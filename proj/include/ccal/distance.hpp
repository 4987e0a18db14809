#pragma once

#include <functional>
#include <span>
#include <string>
#include <vector>

namespace ccal {

/// Symmetric non-negative distance on feature vectors with d(x, x) = 0.
using DistanceFn =
    std::function<double(std::span<const double>, std::span<const double>)>;

double euclidean(std::span<const double> a, std::span<const double> b);
double manhattan(std::span<const double> a, std::span<const double> b);

/// Lookup by name ("euclidean", "manhattan"); throws listing the options.
DistanceFn distance_by_name(const std::string& name);
std::vector<std::string> distance_names();

}  // namespace ccal
