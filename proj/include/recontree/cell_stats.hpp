#pragma once

// Per-cell empirical statistics of a dataset on the dyadic tree.
//
// For a cell I holding n_I of the n sample points:
//   center      c_I = mean of the points in I (cube center when n_I = 0)
//   local_error E_I = (1/n) sum_{x in I} |x - c_I|^2
//   gain        e_I = sqrt((1/n) sum_{J child of I} n_J |c_J - c_I|^2)
// The gain is the drop in local error obtained by splitting I into its children.

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "recontree/dataset.hpp"
#include "recontree/partition_tree.hpp"

namespace recontree {

struct CellStats {
  std::size_t count = 0;
  std::vector<double> center;
  double local_error = 0.0;
  /// Present for cells above the depth cap.
  std::optional<double> gain;
};

class StatsTable {
 public:
  struct Node {
    CellId id;
    CellStats stats;
    /// Nonempty children occupy [first_child, child_end) of the next level.
    std::size_t first_child = 0;
    std::size_t child_end = 0;
    /// Points of this cell occupy [begin, end) of point_order().
    std::size_t begin = 0;
    std::size_t end = 0;
  };

  const TreeConfig& config() const { return config_; }
  int depth_cap() const { return depth_cap_; }
  std::size_t sample_count() const { return sample_count_; }

  /// Nonempty cells at `depth`, in Morton order.
  std::span<const Node> level(int depth) const;
  std::span<const Node> children(int depth, const Node& node) const;

  /// Stored node for a nonempty cell, nullptr for an empty cell.
  const Node* find(const CellId& cell) const;
  /// Statistics for any cell up to the cap; empty cells get count 0, the cube
  /// center and zero error/gain.
  CellStats lookup(const CellId& cell) const;

  /// Permutation of the dataset rows sorting them by cell at the cap depth.
  const std::vector<std::size_t>& point_order() const { return order_; }

 private:
  friend StatsTable build_stats(const Dataset&, int, const TreeConfig&);
  explicit StatsTable(TreeConfig cfg) : config_(cfg) {}

  TreeConfig config_;
  int depth_cap_ = 0;
  std::size_t sample_count_ = 0;
  std::vector<std::vector<Node>> levels_;
  std::vector<std::size_t> order_;
};

/// Statistics for every nonempty cell of depth <= depth_cap; gains for every
/// nonempty cell of depth < depth_cap.
StatsTable build_stats(const Dataset& data, int depth_cap, const TreeConfig& cfg);
StatsTable build_stats(const Dataset& data, int depth_cap);

/// Refinement gain of `cell`, from the center-difference form. Empty cells
/// have gain 0. Throws DepthLimitError at or below the cap.
double gain(const StatsTable& stats, const CellId& cell);

/// True when `a` precedes `b` in Morton (bit-interleaved) order. Both must
/// share depth and dimension.
bool morton_less(std::span<const std::uint64_t> a, std::span<const std::uint64_t> b);

}  // namespace recontree
