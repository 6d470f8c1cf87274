#include <stdexcept>
#include <cmath>
#include <random>

#include "brute.hpp"
#include "doctest.h"
#include "recontree/cell_stats.hpp"
#include "recontree/errors.hpp"
#include "recontree/oracle.hpp"
#include "recontree/reconstruction.hpp"

using namespace recontree;

namespace {

struct Fixture {
  int dim;
  std::vector<double> atoms;
  std::vector<double> weights;
};

Fixture random_fixture(std::mt19937_64& rng, int dim, std::size_t m) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  Fixture f{dim, {}, {}};
  for (std::size_t i = 0; i < m * static_cast<std::size_t>(dim); ++i) f.atoms.push_back(u(rng));
  double total = 0;
  for (std::size_t i = 0; i < m; ++i) total += f.weights.emplace_back(0.05 + u(rng));
  for (auto& w : f.weights) w /= total;
  // Absorb the rounding residue so the weights sum to 1 to the last bit.
  double sum = 0;
  for (std::size_t i = 0; i + 1 < m; ++i) sum += f.weights[i];
  f.weights.back() = 1.0 - sum;
  return f;
}

}  // namespace

TEST_CASE("distribution validation") {
  CHECK_THROWS_AS(DiscreteDistribution(1, {0.1, 0.2}, {0.5, 0.4}), std::invalid_argument);
  CHECK_THROWS_AS(DiscreteDistribution(1, {0.1, 0.2}, {1.0, 0.0}), std::invalid_argument);
  CHECK_THROWS_AS(DiscreteDistribution(1, {0.1, 1.0}, {0.5, 0.5}), DomainError);
  const DiscreteDistribution merged(1, {0.3, 0.7, 0.3}, {0.25, 0.5, 0.25});
  CHECK(merged.size() == 2);
  CHECK(merged.weight(0) == 0.5);
  CHECK(DiscreteDistribution::uniform_grid(2, 3).size() == 64);
}

TEST_CASE("isolation depth") {
  CHECK(isolation_depth(DiscreteDistribution(1, {0.4}, {1.0})) == 0);
  CHECK(isolation_depth(DiscreteDistribution(1, {0.1, 0.9}, {0.5, 0.5})) == 1);
  CHECK(isolation_depth(DiscreteDistribution(1, {0.1, 0.2}, {0.5, 0.5})) == 3);
  CHECK(isolation_depth(DiscreteDistribution(2, {0.1, 0.1, 0.1, 0.6}, {0.5, 0.5})) == 1);
  CHECK(isolation_depth(DiscreteDistribution::uniform_grid(1, 5)) == 5);
  CHECK(default_oracle_depth_cap(DiscreteDistribution::uniform_grid(1, 5)) == 6);
  CHECK_THROWS_AS(isolation_depth(DiscreteDistribution(1, {0.5, std::nextafter(0.5, 1.0)}, {0.5, 0.5})),
                  DepthLimitError);
}

TEST_CASE("oracle statistics match a weighted brute-force scan") {
  std::mt19937_64 rng(17);
  for (int dim : {1, 2}) {
    const auto f = random_fixture(rng, dim, 20);
    const DiscreteDistribution dist(dim, f.atoms, f.weights);
    const int cap = default_oracle_depth_cap(dist);
    const auto table = oracle_stats(dist, cap);
    for (const auto& [id, cell] : table.cells()) {
      const brute::Cell bc{id.depth, id.index};
      const auto ref = brute::stats(f.atoms, dim, bc, &f.weights);
      REQUIRE(ref.count > 0);
      for (int k = 0; k < dim; ++k)
        CHECK(cell.center[static_cast<std::size_t>(k)] ==
              doctest::Approx(static_cast<double>(ref.mean[static_cast<std::size_t>(k)])).epsilon(1e-13));
      CHECK(cell.error == doctest::Approx(static_cast<double>(ref.error)).epsilon(1e-13));
      if (id.depth < cap) {
        const double g2 = static_cast<double>(brute::gain2(f.atoms, dim, bc, &f.weights));
        CHECK(*cell.gain * *cell.gain == doctest::Approx(g2).epsilon(1e-13));
      }
    }
  }
}

TEST_CASE("gains weight children by their own mass") {
  // Root children hold masses 0.8 and 0.2 with means 0.25 and 0.75; c_root = 0.35.
  const DiscreteDistribution dist(1, {0.25, 0.75}, {0.8, 0.2});
  const auto table = oracle_stats(dist, 3);
  const double child_weighted = 0.8 * 0.1 * 0.1 + 0.2 * 0.4 * 0.4;  // 0.04
  const double parent_weighted = 1.0 * (0.1 * 0.1 + 0.4 * 0.4);     // 0.17
  const double g = *table.lookup(CellId::root(1)).gain;
  CHECK(g * g == doctest::Approx(child_weighted).epsilon(1e-15));
  CHECK(g * g != doctest::Approx(parent_weighted));
  CHECK(table.lookup(CellId::root(1)).error == doctest::Approx(0.04).epsilon(1e-15));
}

TEST_CASE("telescoping and local bounds") {
  std::mt19937_64 rng(23);
  for (int trial = 0; trial < 10; ++trial) {
    const int dim = 1 + trial % 2;
    const auto f = random_fixture(rng, dim, 1 + rng() % 30);
    const DiscreteDistribution dist(dim, f.atoms, f.weights);
    const int iso = isolation_depth(dist);
    const auto table = oracle_stats(dist, iso + 1);
    const double total = table.lookup(CellId::root(dim)).error;
    for (int truncation = 0; truncation <= iso; ++truncation) {
      long double gains = 0, tail = 0;
      for (const auto& [id, cell] : table.cells()) {
        if (id.depth < truncation) gains += *cell.gain * *cell.gain;
        if (id.depth == truncation) tail += cell.error;
      }
      CHECK(static_cast<double>(gains + tail) == doctest::Approx(total).epsilon(1e-12).scale(1e-300));
    }
    for (const auto& [id, cell] : table.cells()) {
      const double root_e = std::sqrt(cell.error);
      if (cell.gain) CHECK(*cell.gain <= root_e * (1 + 1e-12) + 1e-300);
      CHECK(root_e <= cell_diameter(id) * std::sqrt(cell.mass) * (1 + 1e-12));
      if (id.depth >= iso) CHECK(cell.error == 0.0);
    }
  }
}

TEST_CASE("thresholds at or above one give the root only") {
  std::mt19937_64 rng(29);
  for (int trial = 0; trial < 10; ++trial) {
    const int dim = 1 + trial % 2;
    const auto f = random_fixture(rng, dim, 10);
    const DiscreteDistribution dist(dim, f.atoms, f.weights);
    for (double eta : {1.0, 1.5, 100.0}) {
      const auto t = oracle_subtree(dist, eta, default_oracle_depth_cap(dist));
      CHECK(t == Subtree(dim));
    }
  }
}

TEST_CASE("shallow caps are refused") {
  const auto dist = DiscreteDistribution::uniform_grid(1, 6);
  CHECK_THROWS_AS(oracle_subtree(dist, 1e-4, 3), CapTooSmallError);
  CHECK_NOTHROW(oracle_subtree(dist, 0.4, 3));
}

TEST_CASE("approximation error sums leaf errors") {
  const auto dist = DiscreteDistribution::uniform_grid(1, 8);
  const double whole = 1.0 / 12.0 - 1.0 / (12.0 * 256 * 256);  // variance of the 256-atom grid
  const auto table = oracle_stats(dist, default_oracle_depth_cap(dist));
  CHECK(table.lookup(CellId::root(1)).error == doctest::Approx(whole).epsilon(1e-14));
  const auto q = oracle_quantizer(table, 0.02);
  double ref = 0;
  for (const auto& leaf : q.leaves) ref += table.lookup(leaf).error;
  CHECK(q.expected_distortion == doctest::Approx(ref).epsilon(1e-14));
  CHECK(approximation_error(dist, 0.02) == q.expected_distortion);
  CHECK(approximation_error(dist, 1e-5) == 0.0);
}

TEST_CASE("oracle agrees with the empirical algorithm on a replicated dataset") {
  std::mt19937_64 rng(41);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int trial = 0; trial < 10; ++trial) {
    const int dim = 1 + trial % 2;
    const std::size_t m = 1 + rng() % 12;
    std::vector<double> atoms;
    for (std::size_t i = 0; i < m * static_cast<std::size_t>(dim); ++i) atoms.push_back(u(rng));
    std::vector<int> mult(m);
    int n = 0;
    for (auto& c : mult) n += c = 1 + static_cast<int>(rng() % 5);
    std::vector<double> weights, values;
    for (std::size_t i = 0; i < m; ++i) {
      weights.push_back(static_cast<double>(mult[i]) / n);
      for (int r = 0; r < mult[i]; ++r)
        for (int k = 0; k < dim; ++k) values.push_back(atoms[i * static_cast<std::size_t>(dim) + static_cast<std::size_t>(k)]);
    }
    double partial = 0;
    for (std::size_t i = 0; i + 1 < m; ++i) partial += weights[i];
    weights.back() = 1.0 - partial;
    const DiscreteDistribution dist(dim, atoms, weights);
    const Dataset data(dim, values);
    const int cap = default_oracle_depth_cap(dist);
    const auto table = oracle_stats(dist, cap);
    const auto stats = build_stats(data, cap);
    for (int e = 0; e < 5; ++e) {
      const double eta = std::exp(std::log(1e-3) * u(rng));
      const auto expected = oracle_quantizer(table, eta);
      const auto got = threshold_subtree(stats, eta, cap);
      CHECK(got == expected.subtree);
    }
  }
}

TEST_CASE("leaf count monitor") {
  const auto dist = DiscreteDistribution::uniform_grid(2, 4);
  const std::vector<double> etas{0.5, 0.1, 0.02};
  const auto rows = leaf_count_bound_monitor(dist, etas);
  REQUIRE(rows.size() == 3);
  for (const auto& r : rows) CHECK(r.leaf_count == 3 * r.subtree_size + 1);
  CHECK(rows[0].subtree_size <= rows[2].subtree_size);
}
