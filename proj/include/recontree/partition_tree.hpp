#pragma once

// Implicit dyadic partition tree over the half-open unit cube [0,1)^D.
//
// A cell at depth j with lattice index (k_1, ..., k_D) is the cube
//   [k_1 2^-j, (k_1+1) 2^-j) x ... x [k_D 2^-j, (k_D+1) 2^-j).
// No tree nodes are ever stored; cells are computed arithmetically and only
// subtrees (finite cell sets) are materialized.

#include <compare>
#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace recontree {

inline constexpr int kDefaultMaxDepth = 32;
inline constexpr int kHardMaxDepth = 62;
inline constexpr int kMaxDim = 20;

struct CellId {
  int depth = 0;
  std::vector<std::uint64_t> index;

  static CellId root(int dim) { return CellId{0, std::vector<std::uint64_t>(static_cast<std::size_t>(dim), 0)}; }

  int dim() const { return static_cast<int>(index.size()); }
  bool is_root() const { return depth == 0; }

  friend bool operator==(const CellId&, const CellId&) = default;
  // Orders by depth, then lexicographically by index.
  friend auto operator<=>(const CellId&, const CellId&) = default;
};

struct CellIdHash {
  std::size_t operator()(const CellId& c) const noexcept;
};

class TreeConfig {
 public:
  explicit TreeConfig(int dim, int max_depth = kDefaultMaxDepth);

  int dim() const { return dim_; }
  int max_depth() const { return max_depth_; }
  /// a = 2^D
  std::size_t branching() const { return std::size_t{1} << dim_; }

 private:
  int dim_;
  int max_depth_;
};

/// Throws StructureError unless `cell` is a well-formed cell of `cfg`.
void validate_cell(const TreeConfig& cfg, const CellId& cell);

/// The unique depth-`depth` cell containing `point`.
CellId locate(const TreeConfig& cfg, std::span<const double> point, int depth);

/// Children in a fixed order: child number c sets index[k] = 2 index[k] + bit k of c.
std::vector<CellId> children(const TreeConfig& cfg, const CellId& cell);
CellId child(const CellId& cell, std::size_t child_number);

/// Parent cell; the root is its own parent.
CellId parent(const CellId& cell);

/// True when `ancestor` contains `cell` (a cell is its own ancestor).
bool is_ancestor_or_self(const CellId& ancestor, const CellId& cell);

bool cell_contains(const CellId& cell, std::span<const double> point);

std::vector<double> cell_lower_corner(const CellId& cell);
std::vector<double> cell_center(const CellId& cell);
/// sqrt(D) 2^-j
double cell_diameter(const CellId& cell);
/// 2^-jD
double cell_volume(const CellId& cell);

/// A finite, parent-closed set of cells containing the root.
class Subtree {
 public:
  /// Root-only subtree.
  explicit Subtree(int dim);

  /// Validates root membership and parent closure; throws StructureError.
  static Subtree from_cells(const TreeConfig& cfg, std::vector<CellId> cells);

  bool contains(const CellId& cell) const;
  std::size_t size() const { return cells_.size(); }
  int dim() const { return dim_; }
  int max_depth() const;
  /// Sorted by (depth, index).
  const std::vector<CellId>& cells() const { return cells_; }

  bool is_subset_of(const Subtree& other) const;

  friend bool operator==(const Subtree&, const Subtree&) = default;

 private:
  Subtree(int dim, std::vector<CellId> sorted_cells);
  friend Subtree smallest_subtree(const TreeConfig&, std::span<const CellId>);

  int dim_;
  std::vector<CellId> cells_;
};

/// Outer leaves of a finite subtree: a partition of the cube.
class OuterLeafPartition {
 public:
  explicit OuterLeafPartition(std::vector<CellId> sorted_leaves) : leaves_(std::move(sorted_leaves)) {}

  const std::vector<CellId>& leaves() const { return leaves_; }
  std::size_t size() const { return leaves_.size(); }
  bool contains(const CellId& cell) const;

 private:
  std::vector<CellId> leaves_;
};

/// Cells not in `subtree` whose parent is in `subtree`.
OuterLeafPartition outer_leaves(const TreeConfig& cfg, const Subtree& subtree);

/// Union of the ancestor chains of `marked`, plus the root.
Subtree smallest_subtree(const TreeConfig& cfg, std::span<const CellId> marked);

}  // namespace recontree
