#include <stdexcept>
#include <random>

#include "doctest.h"
#include "recontree/cell_stats.hpp"
#include "recontree/kmeans.hpp"

using namespace recontree;

namespace {

Dataset make_points(std::uint64_t seed, int dim, std::size_t n) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<double> v(n * static_cast<std::size_t>(dim));
  for (auto& x : v) x = u(rng);
  return Dataset(dim, std::move(v));
}

}  // namespace

TEST_CASE("one center is the mean") {
  const auto data = make_points(1, 3, 500);
  const auto model = kmeans_fit(data, 1, 9);
  const auto root = build_stats(data, 0).level(0)[0].stats;
  for (int k = 0; k < 3; ++k)
    CHECK(model.centers[0][static_cast<std::size_t>(k)] ==
          doctest::Approx(root.center[static_cast<std::size_t>(k)]).epsilon(1e-14));
  CHECK(model.final_objective == doctest::Approx(root.local_error).epsilon(1e-12));
  CHECK(kmeans_distortion(model, data) == doctest::Approx(root.local_error).epsilon(1e-12));
}

TEST_CASE("k = n reaches zero distortion") {
  const auto data = make_points(2, 2, 40);
  const auto model = kmeans_fit(data, 40, 5);
  CHECK(model.final_objective == doctest::Approx(0.0).epsilon(1e-300));
}

TEST_CASE("objective history never increases") {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const auto data = make_points(100 + seed, 1 + static_cast<int>(seed % 3), 300);
    const auto model = kmeans_fit(data, 2 + seed % 9, seed);
    REQUIRE_FALSE(model.objective_history.empty());
    for (std::size_t i = 1; i < model.objective_history.size(); ++i)
      CHECK(model.objective_history[i] <= model.objective_history[i - 1]);
    CHECK(model.final_objective == model.objective_history.back());
  }
}

TEST_CASE("deterministic under a fixed seed") {
  const auto data = make_points(3, 2, 400);
  const auto a = kmeans_fit(data, 7, 42);
  const auto b = kmeans_fit(data, 7, 42);
  CHECK(a.centers == b.centers);
  CHECK(a.objective_history == b.objective_history);
}

TEST_CASE("duplicate points and invalid k") {
  const Dataset data(1, {0.2, 0.2, 0.2, 0.7});
  const auto model = kmeans_fit(data, 3, 1);
  CHECK(model.final_objective == 0.0);
  CHECK_THROWS_AS(kmeans_fit(data, 0, 1), std::invalid_argument);
  CHECK_THROWS_AS(kmeans_fit(data, 5, 1), std::invalid_argument);
}

TEST_CASE("nearest center ties go to the lower index") {
  KMeansModel model;
  model.dim = 1;
  model.k = 2;
  model.centers = {{0.25}, {0.75}};
  const double mid[] = {0.5};
  CHECK(nearest_center(model, mid) == 0);
}
