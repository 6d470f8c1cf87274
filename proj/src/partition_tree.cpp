#include "recontree/partition_tree.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <unordered_set>

#include "recontree/errors.hpp"

namespace recontree {

std::size_t CellIdHash::operator()(const CellId& c) const noexcept {
  std::uint64_t h = 0x9e3779b97f4a7c15ULL ^ static_cast<std::uint64_t>(c.depth);
  for (std::uint64_t v : c.index) {
    h ^= v + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
    h *= 0xbf58476d1ce4e5b9ULL;
  }
  return static_cast<std::size_t>(h ^ (h >> 31));
}

TreeConfig::TreeConfig(int dim, int max_depth) : dim_(dim), max_depth_(max_depth) {
  if (dim < 1 || dim > kMaxDim)
    throw std::invalid_argument("dimension must be in [1, " + std::to_string(kMaxDim) + "], got " +
                                std::to_string(dim));
  if (max_depth < 1 || max_depth > kHardMaxDepth)
    throw std::invalid_argument("max_depth must be in [1, " + std::to_string(kHardMaxDepth) + "], got " +
                                std::to_string(max_depth));
}

void validate_cell(const TreeConfig& cfg, const CellId& cell) {
  if (cell.dim() != cfg.dim())
    throw StructureError("cell has dimension " + std::to_string(cell.dim()) + ", tree has " +
                         std::to_string(cfg.dim()));
  if (cell.depth < 0 || cell.depth > cfg.max_depth())
    throw DepthLimitError("cell depth " + std::to_string(cell.depth) + " outside [0, " +
                          std::to_string(cfg.max_depth()) + "]");
  const std::uint64_t side = std::uint64_t{1} << cell.depth;
  for (std::uint64_t k : cell.index)
    if (k >= side) throw StructureError("lattice index " + std::to_string(k) + " out of range at depth " +
                                        std::to_string(cell.depth));
}

CellId locate(const TreeConfig& cfg, std::span<const double> point, int depth) {
  if (static_cast<int>(point.size()) != cfg.dim())
    throw std::invalid_argument("point dimension " + std::to_string(point.size()) + " does not match tree dimension " +
                                std::to_string(cfg.dim()));
  if (depth < 0 || depth > cfg.max_depth())
    throw DepthLimitError("depth " + std::to_string(depth) + " exceeds max_depth " + std::to_string(cfg.max_depth()));
  CellId cell{depth, std::vector<std::uint64_t>(point.size())};
  const double scale = std::ldexp(1.0, depth);
  for (std::size_t k = 0; k < point.size(); ++k) {
    const double x = point[k];
    if (!(x >= 0.0 && x < 1.0))
      throw DomainError("coordinate " + std::to_string(k) + " = " + std::to_string(x) + " outside [0,1)");
    // x * 2^depth is exact, so floor gives the exact half-open cell.
    cell.index[k] = static_cast<std::uint64_t>(std::floor(x * scale));
  }
  return cell;
}

CellId child(const CellId& cell, std::size_t child_number) {
  CellId c{cell.depth + 1, cell.index};
  for (std::size_t k = 0; k < c.index.size(); ++k) c.index[k] = 2 * c.index[k] + ((child_number >> k) & 1U);
  return c;
}

std::vector<CellId> children(const TreeConfig& cfg, const CellId& cell) {
  if (cell.depth >= cfg.max_depth())
    throw DepthLimitError("cell at depth " + std::to_string(cell.depth) + " has no children below max_depth " +
                          std::to_string(cfg.max_depth()));
  std::vector<CellId> out;
  out.reserve(cfg.branching());
  for (std::size_t c = 0; c < cfg.branching(); ++c) out.push_back(child(cell, c));
  return out;
}

CellId parent(const CellId& cell) {
  if (cell.depth == 0) return cell;
  CellId p{cell.depth - 1, cell.index};
  for (auto& k : p.index) k >>= 1;
  return p;
}

bool is_ancestor_or_self(const CellId& ancestor, const CellId& cell) {
  if (ancestor.depth > cell.depth || ancestor.dim() != cell.dim()) return false;
  const int shift = cell.depth - ancestor.depth;
  for (std::size_t k = 0; k < cell.index.size(); ++k)
    if ((cell.index[k] >> shift) != ancestor.index[k]) return false;
  return true;
}

bool cell_contains(const CellId& cell, std::span<const double> point) {
  if (point.size() != cell.index.size()) return false;
  const double scale = std::ldexp(1.0, cell.depth);
  for (std::size_t k = 0; k < point.size(); ++k) {
    const double x = point[k];
    if (!(x >= 0.0 && x < 1.0)) return false;
    if (static_cast<std::uint64_t>(std::floor(x * scale)) != cell.index[k]) return false;
  }
  return true;
}

std::vector<double> cell_lower_corner(const CellId& cell) {
  std::vector<double> out(cell.index.size());
  for (std::size_t k = 0; k < out.size(); ++k) out[k] = std::ldexp(static_cast<double>(cell.index[k]), -cell.depth);
  return out;
}

std::vector<double> cell_center(const CellId& cell) {
  std::vector<double> out(cell.index.size());
  for (std::size_t k = 0; k < out.size(); ++k)
    out[k] = std::ldexp(2.0 * static_cast<double>(cell.index[k]) + 1.0, -cell.depth - 1);
  return out;
}

double cell_diameter(const CellId& cell) {
  return std::sqrt(static_cast<double>(cell.dim())) * std::ldexp(1.0, -cell.depth);
}

double cell_volume(const CellId& cell) { return std::ldexp(1.0, -cell.depth * cell.dim()); }

Subtree::Subtree(int dim) : dim_(dim), cells_{CellId::root(dim)} {}

Subtree::Subtree(int dim, std::vector<CellId> sorted_cells) : dim_(dim), cells_(std::move(sorted_cells)) {}

Subtree Subtree::from_cells(const TreeConfig& cfg, std::vector<CellId> cells) {
  for (const auto& c : cells) validate_cell(cfg, c);
  std::sort(cells.begin(), cells.end());
  cells.erase(std::unique(cells.begin(), cells.end()), cells.end());
  if (cells.empty() || !cells.front().is_root()) throw StructureError("subtree does not contain the root");
  for (const auto& c : cells) {
    if (c.is_root()) continue;
    if (!std::binary_search(cells.begin(), cells.end(), parent(c)))
      throw StructureError("subtree is not parent-closed: a depth-" + std::to_string(c.depth) +
                           " cell is missing its parent");
  }
  return Subtree(cfg.dim(), std::move(cells));
}

bool Subtree::contains(const CellId& cell) const { return std::binary_search(cells_.begin(), cells_.end(), cell); }

int Subtree::max_depth() const { return cells_.back().depth; }

bool Subtree::is_subset_of(const Subtree& other) const {
  return std::includes(other.cells_.begin(), other.cells_.end(), cells_.begin(), cells_.end());
}

bool OuterLeafPartition::contains(const CellId& cell) const {
  return std::binary_search(leaves_.begin(), leaves_.end(), cell);
}

OuterLeafPartition outer_leaves(const TreeConfig& cfg, const Subtree& subtree) {
  if (subtree.dim() != cfg.dim()) throw StructureError("subtree dimension does not match tree");
  std::vector<CellId> leaves;
  leaves.reserve(subtree.size() * (cfg.branching() - 1) + 1);
  for (const auto& cell : subtree.cells()) {
    if (cell.depth >= cfg.max_depth())
      throw DepthLimitError("subtree reaches max_depth; its outer leaves would lie below the cap");
    for (std::size_t c = 0; c < cfg.branching(); ++c) {
      CellId ch = child(cell, c);
      if (!subtree.contains(ch)) leaves.push_back(std::move(ch));
    }
  }
  std::sort(leaves.begin(), leaves.end());
  return OuterLeafPartition(std::move(leaves));
}

Subtree smallest_subtree(const TreeConfig& cfg, std::span<const CellId> marked) {
  std::unordered_set<CellId, CellIdHash> seen;
  seen.insert(CellId::root(cfg.dim()));
  for (const auto& m : marked) {
    validate_cell(cfg, m);
    // Stop climbing once the chain joins a cell already collected.
    for (CellId c = m; seen.insert(c).second; c = parent(c)) {
    }
  }
  std::vector<CellId> cells(seen.begin(), seen.end());
  std::sort(cells.begin(), cells.end());
  return Subtree(cfg.dim(), std::move(cells));
}

}  // namespace recontree
