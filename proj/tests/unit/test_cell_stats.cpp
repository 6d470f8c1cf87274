#include <stdexcept>
#include <random>

#include "brute.hpp"
#include "doctest.h"
#include "recontree/cell_stats.hpp"
#include "recontree/errors.hpp"

using namespace recontree;

namespace {

Dataset make_points(std::mt19937_64& rng, int dim, std::size_t n) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<double> v(n * static_cast<std::size_t>(dim));
  for (auto& x : v) x = u(rng);
  return Dataset(dim, std::move(v));
}

}  // namespace

TEST_CASE("two points at 0.1 and 0.9") {
  const Dataset data(1, {0.1, 0.9});
  const auto stats = build_stats(data, 3);
  const auto root = stats.lookup(CellId::root(1));
  CHECK(root.count == 2);
  CHECK(root.center[0] == doctest::Approx(0.5));
  CHECK(root.local_error == doctest::Approx(0.16));
  CHECK(*root.gain == doctest::Approx(0.4));
  CHECK(gain(stats, CellId::root(1)) == doctest::Approx(0.4));

  const auto left = stats.lookup(CellId{1, {0}});
  CHECK(left.count == 1);
  CHECK(left.center[0] == doctest::Approx(0.1));
  CHECK(left.local_error == 0.0);
  CHECK(*left.gain == 0.0);
}

TEST_CASE("empty cells and cap boundaries") {
  const Dataset data(1, {0.1, 0.9});
  const auto stats = build_stats(data, 2);
  CHECK(stats.find(CellId{2, {1}}) == nullptr);
  const auto empty = stats.lookup(CellId{2, {1}});
  CHECK(empty.count == 0);
  CHECK(empty.center[0] == doctest::Approx(0.375));
  CHECK(gain(stats, CellId{1, {0}}) == 0.0);
  CHECK_THROWS_AS(gain(stats, CellId{2, {0}}), DepthLimitError);
  CHECK_FALSE(stats.lookup(CellId{2, {0}}).gain.has_value());
  CHECK_THROWS_AS(stats.lookup(CellId{3, {0}}), DepthLimitError);
}

TEST_CASE("statistics match a brute-force scan") {
  std::mt19937_64 rng(11);
  for (int dim : {1, 2, 3}) {
    const auto data = make_points(rng, dim, 300);
    const int cap = 4;
    const auto stats = build_stats(data, cap);
    std::size_t cells_seen = 0;
    for (int j = 0; j <= cap; ++j) {
      std::size_t total = 0;
      for (const auto& node : stats.level(j)) {
        ++cells_seen;
        const brute::Cell bc{node.id.depth, node.id.index};
        const auto ref = brute::stats(data.values(), dim, bc);
        CHECK(node.stats.count == ref.count);
        total += node.stats.count;
        for (int k = 0; k < dim; ++k)
          CHECK(node.stats.center[static_cast<std::size_t>(k)] ==
                doctest::Approx(static_cast<double>(ref.mean[static_cast<std::size_t>(k)])).epsilon(1e-12));
        CHECK(node.stats.local_error == doctest::Approx(static_cast<double>(ref.error)).epsilon(1e-10));
        if (j < cap) {
          const double g2 = static_cast<double>(brute::gain2(data.values(), dim, bc));
          CHECK(*node.stats.gain * *node.stats.gain == doctest::Approx(g2).epsilon(1e-10));
        }
      }
      CHECK(total == data.size());
    }
    CHECK(cells_seen > static_cast<std::size_t>(cap));
  }
}

TEST_CASE("gain squared equals the drop in local error") {
  std::mt19937_64 rng(3);
  const auto data = make_points(rng, 2, 1000);
  const auto stats = build_stats(data, 6);
  for (int j = 0; j < 6; ++j)
    for (const auto& node : stats.level(j)) {
      double children_error = 0;
      for (const auto& ch : stats.children(j, node)) children_error += ch.stats.local_error;
      const double g = *node.stats.gain;
      CHECK(g * g == doctest::Approx(node.stats.local_error - children_error).epsilon(1e-9).scale(1e-12));
    }
}

TEST_CASE("point order groups every cell contiguously") {
  std::mt19937_64 rng(5);
  const auto data = make_points(rng, 3, 500);
  const auto stats = build_stats(data, 5);
  const auto& order = stats.point_order();
  for (int j = 0; j <= 5; ++j)
    for (const auto& node : stats.level(j)) {
      CHECK(node.end - node.begin == node.stats.count);
      for (std::size_t i = node.begin; i < node.end; ++i) CHECK(cell_contains(node.id, data.point(order[i])));
    }
}

TEST_CASE("morton order") {
  const std::uint64_t a[] = {1, 0}, b[] = {0, 1}, c[] = {1, 1};
  CHECK(morton_less(a, b));
  CHECK(morton_less(b, c));
  CHECK_FALSE(morton_less(c, a));
  CHECK_FALSE(morton_less(a, a));
}

TEST_CASE("duplicate points") {
  const Dataset data(2, {0.3, 0.3, 0.3, 0.3, 0.3, 0.3});
  const auto stats = build_stats(data, 10);
  for (int j = 0; j < 10; ++j) {
    REQUIRE(stats.level(j).size() == 1);
    CHECK(*stats.level(j)[0].stats.gain == 0.0);
    CHECK(stats.level(j)[0].stats.local_error == 0.0);
  }
}
