#include "recontree/cell_stats.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <string>

#include "recontree/errors.hpp"

namespace recontree {

namespace {

bool less_msb(std::uint64_t x, std::uint64_t y) { return x < y && x < (x ^ y); }

void compute_cell_stats(const Dataset& data, const std::vector<std::size_t>& order, StatsTable::Node& node,
                        double inv_n) {
  const auto dim = static_cast<std::size_t>(data.dim());
  auto& st = node.stats;
  st.count = node.end - node.begin;
  st.center.assign(dim, 0.0);
  for (std::size_t p = node.begin; p < node.end; ++p) {
    const auto x = data.point(order[p]);
    for (std::size_t k = 0; k < dim; ++k) st.center[k] += x[k];
  }
  const double inv_count = 1.0 / static_cast<double>(st.count);
  for (auto& c : st.center) c *= inv_count;
  // One correction sweep tightens the mean before the scatter pass.
  std::vector<double> residual(dim, 0.0);
  for (std::size_t p = node.begin; p < node.end; ++p) {
    const auto x = data.point(order[p]);
    for (std::size_t k = 0; k < dim; ++k) residual[k] += x[k] - st.center[k];
  }
  for (std::size_t k = 0; k < dim; ++k) st.center[k] += residual[k] * inv_count;

  double scatter = 0.0;
  for (std::size_t p = node.begin; p < node.end; ++p) scatter += squared_distance(data.point(order[p]), st.center);
  st.local_error = scatter * inv_n;
}

}  // namespace

bool morton_less(std::span<const std::uint64_t> a, std::span<const std::uint64_t> b) {
  std::size_t top = 0;
  std::uint64_t top_bits = 0;
  for (std::size_t k = 0; k < a.size(); ++k) {
    const std::uint64_t diff = a[k] ^ b[k];
    // Ties go to the later coordinate, so siblings follow child-number order.
    if (diff != 0 && !less_msb(diff, top_bits)) {
      top = k;
      top_bits = diff;
    }
  }
  return a[top] < b[top];
}

StatsTable build_stats(const Dataset& data, int depth_cap) {
  return build_stats(data, depth_cap, TreeConfig(data.dim()));
}

StatsTable build_stats(const Dataset& data, int depth_cap, const TreeConfig& cfg) {
  if (data.dim() != cfg.dim()) throw std::invalid_argument("dataset dimension does not match tree dimension");
  if (data.empty()) throw std::invalid_argument("cannot build statistics from an empty dataset");
  if (depth_cap < 0 || depth_cap > cfg.max_depth())
    throw DepthLimitError("depth cap " + std::to_string(depth_cap) + " exceeds max_depth " +
                          std::to_string(cfg.max_depth()));

  const std::size_t n = data.size();
  const auto dim = static_cast<std::size_t>(cfg.dim());
  const double scale = std::ldexp(1.0, depth_cap);

  std::vector<std::uint64_t> coords(n * dim);
  for (std::size_t i = 0; i < n; ++i) {
    const auto x = data.point(i);
    for (std::size_t k = 0; k < dim; ++k) coords[i * dim + k] = static_cast<std::uint64_t>(std::floor(x[k] * scale));
  }
  auto row = [&](std::size_t i) { return std::span<const std::uint64_t>(coords.data() + i * dim, dim); };

  StatsTable table(cfg);
  table.depth_cap_ = depth_cap;
  table.sample_count_ = n;
  table.order_.resize(n);
  std::iota(table.order_.begin(), table.order_.end(), std::size_t{0});
  std::stable_sort(table.order_.begin(), table.order_.end(),
                   [&](std::size_t a, std::size_t b) { return morton_less(row(a), row(b)); });
  const auto& order = table.order_;

  table.levels_.resize(static_cast<std::size_t>(depth_cap) + 1);
  StatsTable::Node root;
  root.id = CellId::root(cfg.dim());
  root.begin = 0;
  root.end = n;
  table.levels_[0].push_back(std::move(root));

  for (int j = 0; j < depth_cap; ++j) {
    const int shift = depth_cap - (j + 1);
    auto& parents = table.levels_[static_cast<std::size_t>(j)];
    auto& kids = table.levels_[static_cast<std::size_t>(j) + 1];
    kids.reserve(std::min(n, parents.size() * cfg.branching()));
    auto same_cell = [&](std::size_t a, std::size_t b) {
      for (std::size_t k = 0; k < dim; ++k)
        if ((coords[a * dim + k] >> shift) != (coords[b * dim + k] >> shift)) return false;
      return true;
    };
    for (auto& p : parents) {
      p.first_child = kids.size();
      std::size_t start = p.begin;
      while (start < p.end) {
        std::size_t stop = start + 1;
        while (stop < p.end && same_cell(order[start], order[stop])) ++stop;
        StatsTable::Node c;
        c.id.depth = j + 1;
        c.id.index.resize(dim);
        for (std::size_t k = 0; k < dim; ++k) c.id.index[k] = coords[order[start] * dim + k] >> shift;
        c.begin = start;
        c.end = stop;
        kids.push_back(std::move(c));
        start = stop;
      }
      p.child_end = kids.size();
    }
  }

  const double inv_n = 1.0 / static_cast<double>(n);
  for (auto& lvl : table.levels_)
    for (auto& node : lvl) compute_cell_stats(data, order, node, inv_n);

  // Child means are taken as offsets from the parent's rounded center, so
  // the rounding of either center does not enter the difference c_J - c_I.
  std::vector<std::vector<double>> offsets;
  std::vector<double> drift(dim);
  for (int j = 0; j < depth_cap; ++j) {
    const auto& kids = table.levels_[static_cast<std::size_t>(j) + 1];
    for (auto& p : table.levels_[static_cast<std::size_t>(j)]) {
      const auto& center = p.stats.center;
      offsets.assign(p.child_end - p.first_child, std::vector<double>(dim, 0.0));
      std::fill(drift.begin(), drift.end(), 0.0);
      for (std::size_t c = p.first_child; c < p.child_end; ++c) {
        auto& off = offsets[c - p.first_child];
        for (std::size_t q = kids[c].begin; q < kids[c].end; ++q) {
          const auto x = data.point(order[q]);
          for (std::size_t k = 0; k < dim; ++k) off[k] += x[k] - center[k];
        }
        for (std::size_t k = 0; k < dim; ++k) drift[k] += off[k];
        for (auto& v : off) v /= static_cast<double>(kids[c].stats.count);
      }
      for (auto& v : drift) v /= static_cast<double>(p.stats.count);
      double spread = 0.0;
      for (std::size_t c = p.first_child; c < p.child_end; ++c) {
        double d2 = 0.0;
        for (std::size_t k = 0; k < dim; ++k) {
          const double d = offsets[c - p.first_child][k] - drift[k];
          d2 += d * d;
        }
        spread += static_cast<double>(kids[c].stats.count) * d2;
      }
      p.stats.gain = std::sqrt(spread * inv_n);
    }
  }
  return table;
}

std::span<const StatsTable::Node> StatsTable::level(int depth) const {
  if (depth < 0 || depth > depth_cap_)
    throw DepthLimitError("no statistics at depth " + std::to_string(depth) + " (cap " + std::to_string(depth_cap_) +
                          ")");
  return levels_[static_cast<std::size_t>(depth)];
}

std::span<const StatsTable::Node> StatsTable::children(int depth, const Node& node) const {
  if (depth >= depth_cap_) return {};
  const auto& kids = levels_[static_cast<std::size_t>(depth) + 1];
  return std::span<const Node>(kids).subspan(node.first_child, node.child_end - node.first_child);
}

const StatsTable::Node* StatsTable::find(const CellId& cell) const {
  validate_cell(config_, cell);
  if (cell.depth > depth_cap_)
    throw DepthLimitError("cell depth " + std::to_string(cell.depth) + " is below the statistics cap " +
                          std::to_string(depth_cap_));
  const auto& lvl = levels_[static_cast<std::size_t>(cell.depth)];
  auto it = std::lower_bound(lvl.begin(), lvl.end(), cell,
                             [](const Node& n, const CellId& c) { return morton_less(n.id.index, c.index); });
  if (it != lvl.end() && it->id == cell) return &*it;
  return nullptr;
}

CellStats StatsTable::lookup(const CellId& cell) const {
  if (const Node* node = find(cell)) return node->stats;
  CellStats empty;
  empty.center = cell_center(cell);
  if (cell.depth < depth_cap_) empty.gain = 0.0;
  return empty;
}

double gain(const StatsTable& stats, const CellId& cell) {
  if (cell.depth >= stats.depth_cap())
    throw DepthLimitError("gain undefined at depth " + std::to_string(cell.depth) + ": children statistics end at cap " +
                          std::to_string(stats.depth_cap()));
  const auto* node = stats.find(cell);
  return node ? *node->stats.gain : 0.0;
}

}  // namespace recontree
