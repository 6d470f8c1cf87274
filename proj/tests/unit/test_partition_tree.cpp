#include <stdexcept>
#include <random>

#include "doctest.h"
#include "recontree/errors.hpp"
#include "recontree/partition_tree.hpp"

using namespace recontree;

TEST_CASE("locate uses half-open cells") {
  const TreeConfig cfg(1);
  const double lo[] = {0.0}, mid[] = {0.5}, below[] = {0.49999999999999994}, top[] = {0.9999999999999999};
  CHECK(locate(cfg, lo, 3) == CellId{3, {0}});
  CHECK(locate(cfg, mid, 1) == CellId{1, {1}});
  CHECK(locate(cfg, below, 1) == CellId{1, {0}});
  CHECK(locate(cfg, top, 4) == CellId{4, {15}});
  CHECK(locate(cfg, mid, 0).is_root());

  const double one[] = {1.0}, neg[] = {-1e-300}, nan[] = {std::nan("")};
  CHECK_THROWS_AS(locate(cfg, one, 2), DomainError);
  CHECK_THROWS_AS(locate(cfg, neg, 2), DomainError);
  CHECK_THROWS_AS(locate(cfg, nan, 2), DomainError);
  CHECK_THROWS_AS(locate(cfg, mid, 33), DepthLimitError);
}

TEST_CASE("locate in two dimensions") {
  const TreeConfig cfg(2);
  const double p[] = {0.3, 0.8};
  CHECK(locate(cfg, p, 2) == CellId{2, {1, 3}});
  CHECK(cell_contains(CellId{2, {1, 3}}, p));
  CHECK_FALSE(cell_contains(CellId{2, {1, 2}}, p));
}

TEST_CASE("children enumerate bit k into coordinate k") {
  const TreeConfig cfg(2);
  const auto kids = children(cfg, CellId::root(2));
  REQUIRE(kids.size() == 4);
  CHECK(kids[0] == CellId{1, {0, 0}});
  CHECK(kids[1] == CellId{1, {1, 0}});
  CHECK(kids[2] == CellId{1, {0, 1}});
  CHECK(kids[3] == CellId{1, {1, 1}});
  for (const auto& k : kids) CHECK(parent(k).is_root());
  CHECK(parent(CellId::root(2)).is_root());
  CHECK(parent(CellId{3, {5, 2}}) == CellId{2, {2, 1}});
  CHECK_THROWS_AS(children(TreeConfig(1, 2), CellId{2, {0}}), DepthLimitError);
}

TEST_CASE("cell geometry") {
  const CellId c{2, {1, 3}};
  CHECK(cell_lower_corner(c) == std::vector<double>{0.25, 0.75});
  CHECK(cell_center(c) == std::vector<double>{0.375, 0.875});
  CHECK(cell_volume(c) == doctest::Approx(1.0 / 16));
  CHECK(cell_diameter(c) == doctest::Approx(std::sqrt(2.0) / 4));
  CHECK(is_ancestor_or_self(CellId{1, {0, 1}}, c));
  CHECK(is_ancestor_or_self(c, c));
  CHECK_FALSE(is_ancestor_or_self(CellId{1, {1, 1}}, c));
  CHECK_FALSE(is_ancestor_or_self(c, CellId{1, {0, 1}}));
}

TEST_CASE("validate_cell") {
  const TreeConfig cfg(2, 5);
  CHECK_NOTHROW(validate_cell(cfg, CellId{2, {3, 0}}));
  CHECK_THROWS_AS(validate_cell(cfg, CellId{2, {4, 0}}), StructureError);
  CHECK_THROWS_AS(validate_cell(cfg, CellId{2, {0}}), StructureError);
  CHECK_THROWS_AS(validate_cell(cfg, CellId{6, {0, 0}}), DepthLimitError);
  CHECK_THROWS_AS(TreeConfig(0), std::invalid_argument);
  CHECK_THROWS_AS(TreeConfig(1, kHardMaxDepth + 1), std::invalid_argument);
}

TEST_CASE("root-only subtree has a children-of-root partition") {
  for (int d = 1; d <= 3; ++d) {
    const TreeConfig cfg(d);
    const auto leaves = outer_leaves(cfg, Subtree(d));
    CHECK(leaves.size() == cfg.branching());
    for (const auto& l : leaves.leaves()) CHECK(l.depth == 1);
  }
}

TEST_CASE("smallest_subtree is the ancestor closure") {
  const TreeConfig cfg(1);
  const std::vector<CellId> marked{CellId{3, {5}}};
  const auto t = smallest_subtree(cfg, marked);
  CHECK(t.size() == 4);
  CHECK(t.contains(CellId{2, {2}}));
  CHECK(t.contains(CellId{1, {1}}));
  CHECK(t.max_depth() == 3);
  const auto leaves = outer_leaves(cfg, t);
  CHECK(leaves.size() == 5);
  CHECK(leaves.contains(CellId{1, {0}}));
  CHECK(leaves.contains(CellId{4, {11}}));
  CHECK(smallest_subtree(cfg, {}) == Subtree(1));
}

TEST_CASE("from_cells rejects sets that are not parent-closed") {
  const TreeConfig cfg(1);
  CHECK_THROWS_AS(Subtree::from_cells(cfg, {CellId{0, {0}}, CellId{2, {0}}}), StructureError);
  CHECK_THROWS_AS(Subtree::from_cells(cfg, {CellId{1, {0}}}), StructureError);
  const auto t = Subtree::from_cells(cfg, {CellId{1, {1}}, CellId{0, {0}}});
  CHECK(t.size() == 2);
  CHECK(Subtree(1).is_subset_of(t));
  CHECK_FALSE(t.is_subset_of(Subtree(1)));
}

TEST_CASE("random subtrees: leaves tile and the count bound holds") {
  std::mt19937_64 rng(7);
  for (int trial = 0; trial < 50; ++trial) {
    const int d = 1 + static_cast<int>(rng() % 3);
    const TreeConfig cfg(d);
    std::vector<CellId> cells{CellId::root(d)};
    const std::size_t target = 1 + rng() % 60;
    while (cells.size() < target) {
      const auto& base = cells[rng() % cells.size()];
      if (base.depth >= 10) continue;
      cells.push_back(child(base, rng() % cfg.branching()));
    }
    const auto t = smallest_subtree(cfg, cells);
    const auto leaves = outer_leaves(cfg, t);
    CHECK(leaves.size() == (cfg.branching() - 1) * t.size() + 1);
    double volume = 0;
    for (const auto& l : leaves.leaves()) {
      CHECK_FALSE(t.contains(l));
      CHECK(t.contains(parent(l)));
      volume += cell_volume(l);
    }
    CHECK(volume == doctest::Approx(1.0).epsilon(1e-12));
  }
}
