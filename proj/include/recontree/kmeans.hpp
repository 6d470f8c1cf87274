#pragma once

// Lloyd's k-means with k-means++ seeding, the Voronoi baseline for
// reconstruction trees.

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "recontree/dataset.hpp"

namespace recontree {

struct KMeansModel {
  int dim = 0;
  std::size_t k = 0;
  std::vector<std::vector<double>> centers;
  int iterations_run = 0;
  double final_objective = 0.0;
  /// Objective after the initial assignment and after every accepted Lloyd step.
  std::vector<double> objective_history;
};

/// Deterministic given `seed`. Stops when the relative improvement drops
/// below `tol` or after `max_iters` Lloyd steps. Throws std::invalid_argument
/// unless 1 <= k <= n.
KMeansModel kmeans_fit(const Dataset& data, std::size_t k, std::uint64_t seed, int max_iters = 300,
                       double tol = 1e-10);

/// Index of the nearest center; ties go to the lowest index.
std::size_t nearest_center(const KMeansModel& model, std::span<const double> point);

/// Mean squared distance to the nearest center.
double kmeans_distortion(const KMeansModel& model, const Dataset& data);

}  // namespace recontree
