#include "recontree/kmeans.hpp"

#include <algorithm>
#include <limits>
#include <stdexcept>
#include <string>

#include "recontree/rng.hpp"

namespace recontree {

namespace {

using Centers = std::vector<std::vector<double>>;

std::size_t nearest(const Centers& centers, std::span<const double> x, double& best) {
  std::size_t arg = 0;
  best = std::numeric_limits<double>::infinity();
  for (std::size_t c = 0; c < centers.size(); ++c) {
    const double d = squared_distance(x, centers[c]);
    if (d < best) {
      best = d;
      arg = c;
    }
  }
  return arg;
}

double assign(const Dataset& data, const Centers& centers, std::vector<std::size_t>& labels) {
  labels.resize(data.size());
  double total = 0.0;
  for (std::size_t i = 0; i < data.size(); ++i) {
    double d = 0.0;
    labels[i] = nearest(centers, data.point(i), d);
    total += d;
  }
  return total / static_cast<double>(data.size());
}

Centers plus_plus_seeding(const Dataset& data, std::size_t k, CounterRng& rng) {
  const std::size_t n = data.size();
  Centers centers;
  centers.reserve(k);
  auto first = data.point(rng.below(n));
  centers.emplace_back(first.begin(), first.end());
  std::vector<double> d2(n);
  for (std::size_t i = 0; i < n; ++i) d2[i] = squared_distance(data.point(i), centers[0]);
  while (centers.size() < k) {
    double total = 0.0;
    for (double d : d2) total += d;
    std::size_t pick = n;
    if (total > 0.0) {
      const double r = rng.uniform() * total;
      double acc = 0.0;
      for (std::size_t i = 0; i < n; ++i) {
        acc += d2[i];
        if (d2[i] > 0.0 && acc > r) {
          pick = i;
          break;
        }
      }
      // Rounding can leave r at the very end of the cumulative sum.
      if (pick == n)
        for (std::size_t i = n; i-- > 0;)
          if (d2[i] > 0.0) {
            pick = i;
            break;
          }
    } else {
      pick = rng.below(n);
    }
    auto x = data.point(pick);
    centers.emplace_back(x.begin(), x.end());
    for (std::size_t i = 0; i < n; ++i) d2[i] = std::min(d2[i], squared_distance(data.point(i), centers.back()));
  }
  return centers;
}

Centers update_centers(const Dataset& data, const Centers& old, const std::vector<std::size_t>& labels) {
  const auto dim = static_cast<std::size_t>(data.dim());
  const std::size_t k = old.size();
  Centers sum(k, std::vector<double>(dim, 0.0));
  std::vector<std::size_t> count(k, 0);
  for (std::size_t i = 0; i < data.size(); ++i) {
    const auto x = data.point(i);
    ++count[labels[i]];
    for (std::size_t d = 0; d < dim; ++d) sum[labels[i]][d] += x[d];
  }
  for (std::size_t c = 0; c < k; ++c)
    if (count[c] > 0)
      for (auto& v : sum[c]) v /= static_cast<double>(count[c]);
  // Second pass corrects the means for rounding in the first sums.
  Centers residual(k, std::vector<double>(dim, 0.0));
  for (std::size_t i = 0; i < data.size(); ++i) {
    const auto x = data.point(i);
    for (std::size_t d = 0; d < dim; ++d) residual[labels[i]][d] += x[d] - sum[labels[i]][d];
  }
  for (std::size_t c = 0; c < k; ++c)
    if (count[c] > 0)
      for (std::size_t d = 0; d < dim; ++d) sum[c][d] += residual[c][d] / static_cast<double>(count[c]);

  // Empty clusters move to the point farthest from its current center.
  std::vector<double> slack;
  for (std::size_t c = 0; c < k; ++c) {
    if (count[c] > 0) continue;
    if (slack.empty()) {
      slack.resize(data.size());
      for (std::size_t i = 0; i < data.size(); ++i) slack[i] = squared_distance(data.point(i), sum[labels[i]]);
    }
    const auto far = static_cast<std::size_t>(std::max_element(slack.begin(), slack.end()) - slack.begin());
    const auto x = data.point(far);
    sum[c].assign(x.begin(), x.end());
    slack[far] = 0.0;
  }
  return sum;
}

}  // namespace

KMeansModel kmeans_fit(const Dataset& data, std::size_t k, std::uint64_t seed, int max_iters, double tol) {
  if (k < 1 || k > data.size())
    throw std::invalid_argument("k must lie in [1, n]; got k = " + std::to_string(k) +
                                ", n = " + std::to_string(data.size()));
  if (max_iters < 0 || !(tol >= 0.0)) throw std::invalid_argument("max_iters and tol must be non-negative");

  CounterRng rng(seed);
  KMeansModel model;
  model.dim = data.dim();
  model.k = k;
  model.centers = plus_plus_seeding(data, k, rng);

  std::vector<std::size_t> labels;
  double objective = assign(data, model.centers, labels);
  model.objective_history.push_back(objective);

  std::vector<std::size_t> next_labels;
  for (int it = 0; it < max_iters; ++it) {
    auto next = update_centers(data, model.centers, labels);
    const double next_objective = assign(data, next, next_labels);
    // A rounding-level increase means the iteration has converged.
    if (next_objective > objective) break;
    model.centers = std::move(next);
    labels.swap(next_labels);
    ++model.iterations_run;
    model.objective_history.push_back(next_objective);
    const double improvement = objective - next_objective;
    objective = next_objective;
    if (improvement <= tol * model.objective_history[model.objective_history.size() - 2]) break;
  }
  model.final_objective = objective;
  return model;
}

std::size_t nearest_center(const KMeansModel& model, std::span<const double> point) {
  double d = 0.0;
  return nearest(model.centers, point, d);
}

double kmeans_distortion(const KMeansModel& model, const Dataset& data) {
  if (data.dim() != model.dim) throw std::invalid_argument("dataset dimension does not match model");
  if (data.empty()) return 0.0;
  double total = 0.0;
  for (std::size_t i = 0; i < data.size(); ++i) {
    double d = 0.0;
    nearest(model.centers, data.point(i), d);
    total += d;
  }
  return total / static_cast<double>(data.size());
}

}  // namespace recontree
