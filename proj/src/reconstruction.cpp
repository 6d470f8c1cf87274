#include "recontree/reconstruction.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

#include "recontree/errors.hpp"

namespace recontree {

namespace {

// Leaves sit one level below the deepest marked cell, so statistics must
// reach depth 1 even when the schedule truncates at the root.
int stats_depth(int cap) { return std::max(cap, 1); }

}  // namespace

RateSchedule RateSchedule::for_dim(int dim, double gamma, double beta) {
  if (dim < 1 || dim > kMaxDim) throw std::invalid_argument("schedule dimension out of range");
  if (!(gamma > 0.0) || !(beta > 0.0)) throw std::invalid_argument("schedule requires gamma > 0 and beta > 0");
  return RateSchedule{gamma, beta, dim};
}

int RateSchedule::depth(std::size_t n) const {
  if (n == 0) throw std::invalid_argument("schedule depth undefined for n = 0");
  // ln a = D ln 2, and log2 is exact on powers of two.
  return static_cast<int>(std::floor(gamma * std::log2(static_cast<double>(n)) / static_cast<double>(dim)));
}

double RateSchedule::c_a() const { return 1.0 / (128.0 * (static_cast<double>(branching()) + 1.0)); }

double RateSchedule::eta(std::size_t n) const {
  if (n == 0) throw std::invalid_argument("schedule threshold undefined for n = 0");
  const double nn = static_cast<double>(n);
  return std::sqrt((gamma + beta) * std::log(nn) / (c_a() * nn));
}

Quantizer::Quantizer(int dim, std::vector<CellId> leaves, std::vector<std::vector<double>> codes, double eta,
                     int depth_cap, RateSchedule schedule)
    : dim_(dim),
      leaves_(std::move(leaves)),
      codes_(std::move(codes)),
      eta_(eta),
      depth_cap_(depth_cap),
      schedule_(schedule) {
  if (leaves_.empty()) throw StructureError("quantizer needs at least one leaf");
  if (leaves_.size() != codes_.size()) throw StructureError("every leaf needs exactly one code vector");
  if (!std::is_sorted(leaves_.begin(), leaves_.end())) {
    std::vector<std::size_t> perm(leaves_.size());
    for (std::size_t i = 0; i < perm.size(); ++i) perm[i] = i;
    std::sort(perm.begin(), perm.end(), [&](std::size_t a, std::size_t b) { return leaves_[a] < leaves_[b]; });
    std::vector<CellId> l;
    std::vector<std::vector<double>> c;
    for (auto i : perm) {
      l.push_back(std::move(leaves_[i]));
      c.push_back(std::move(codes_[i]));
    }
    leaves_ = std::move(l);
    codes_ = std::move(c);
  }
  min_depth_ = leaves_.front().depth;
  max_depth_ = leaves_.back().depth;
  position_.reserve(leaves_.size());
  for (std::size_t i = 0; i < leaves_.size(); ++i) {
    if (leaves_[i].dim() != dim_ || codes_[i].size() != static_cast<std::size_t>(dim_))
      throw StructureError("leaf or code vector dimension mismatch");
    if (!position_.emplace(leaves_[i], i).second) throw StructureError("duplicate leaf in quantizer");
  }
}

std::optional<std::size_t> Quantizer::leaf_position(const CellId& cell) const {
  auto it = position_.find(cell);
  if (it == position_.end()) return std::nullopt;
  return it->second;
}

Subtree threshold_subtree(const StatsTable& stats, double eta, int depth_cap) {
  if (!(eta >= 0.0)) throw std::invalid_argument("threshold must be non-negative");
  const int cap = std::min(depth_cap, stats.depth_cap());
  std::vector<CellId> marked;
  for (int j = 0; j < cap; ++j)
    for (const auto& node : stats.level(j))
      if (*node.stats.gain >= eta) marked.push_back(node.id);
  return smallest_subtree(stats.config(), marked);
}

Quantizer quantizer_from_subtree(const StatsTable& stats, const Subtree& subtree, double eta, int depth_cap,
                                 const RateSchedule& schedule) {
  auto leaves = outer_leaves(stats.config(), subtree);
  std::vector<std::vector<double>> codes;
  codes.reserve(leaves.size());
  for (const auto& leaf : leaves.leaves()) codes.push_back(stats.lookup(leaf).center);
  return Quantizer(stats.config().dim(), leaves.leaves(), std::move(codes), eta, depth_cap, schedule);
}

Quantizer fit(const Dataset& data, double eta, const RateSchedule& schedule, int max_depth) {
  if (data.empty()) throw std::invalid_argument("cannot fit a quantizer to an empty dataset");
  if (schedule.dim != data.dim()) throw std::invalid_argument("schedule dimension does not match dataset");
  const TreeConfig cfg(data.dim(), max_depth);
  const int cap = schedule.depth(data.size());
  if (cap > max_depth)
    throw DepthLimitError("schedule depth " + std::to_string(cap) + " exceeds max_depth " + std::to_string(max_depth));
  const auto stats = build_stats(data, stats_depth(cap), cfg);
  return quantizer_from_subtree(stats, threshold_subtree(stats, eta, cap), eta, cap, schedule);
}

Quantizer fit(const Dataset& data, const RateSchedule& schedule, int max_depth) {
  if (data.empty()) throw std::invalid_argument("cannot fit a quantizer to an empty dataset");
  return fit(data, schedule.eta(data.size()), schedule, max_depth);
}

Quantizer root_quantizer(const Dataset& data) {
  const auto stats = build_stats(data, 0);
  return Quantizer(data.dim(), {CellId::root(data.dim())}, {stats.level(0)[0].stats.center},
                   std::numeric_limits<double>::infinity(), 0, RateSchedule::for_dim(data.dim()));
}

std::size_t encode_position(const Quantizer& q, std::span<const double> point) {
  if (static_cast<int>(point.size()) != q.dim()) throw std::invalid_argument("point dimension does not match quantizer");
  const int deepest = q.max_leaf_depth();
  const double scale = std::ldexp(1.0, deepest);
  std::vector<std::uint64_t> fine(point.size());
  for (std::size_t k = 0; k < point.size(); ++k) {
    const double x = point[k];
    if (!(x >= 0.0 && x < 1.0))
      throw DomainError("coordinate " + std::to_string(k) + " = " + std::to_string(x) + " outside [0,1)");
    fine[k] = static_cast<std::uint64_t>(std::floor(x * scale));
  }
  CellId cell{0, std::vector<std::uint64_t>(point.size())};
  for (int d = q.min_leaf_depth(); d <= deepest; ++d) {
    cell.depth = d;
    for (std::size_t k = 0; k < fine.size(); ++k) cell.index[k] = fine[k] >> (deepest - d);
    if (auto pos = q.leaf_position(cell)) return *pos;
  }
  throw StructureError("quantizer leaves do not cover the point");
}

CellId encode(const Quantizer& q, std::span<const double> point) { return q.leaves()[encode_position(q, point)]; }

std::span<const double> decode(const Quantizer& q, const CellId& leaf) {
  auto pos = q.leaf_position(leaf);
  if (!pos) throw std::out_of_range("cell is not a leaf of the quantizer");
  return q.code(*pos);
}

double empirical_distortion(const Quantizer& q, const Dataset& data) {
  if (data.dim() != q.dim()) throw std::invalid_argument("dataset dimension does not match quantizer");
  if (data.empty()) return 0.0;
  double total = 0.0;
  for (std::size_t i = 0; i < data.size(); ++i) {
    const auto x = data.point(i);
    total += squared_distance(x, q.code(encode_position(q, x)));
  }
  return total / static_cast<double>(data.size());
}

std::vector<SweepEntry> sweep(const Dataset& data, std::span<const double> etas, const RateSchedule& schedule,
                              int max_depth) {
  if (data.empty()) throw std::invalid_argument("cannot sweep an empty dataset");
  if (schedule.dim != data.dim()) throw std::invalid_argument("schedule dimension does not match dataset");
  for (double eta : etas)
    if (!(eta >= 0.0)) throw std::invalid_argument("sweep thresholds must be non-negative");
  const TreeConfig cfg(data.dim(), max_depth);
  const int cap = schedule.depth(data.size());
  if (cap > max_depth)
    throw DepthLimitError("schedule depth " + std::to_string(cap) + " exceeds max_depth " + std::to_string(max_depth));
  const auto stats = build_stats(data, stats_depth(cap), cfg);

  std::vector<SweepEntry> out;
  out.reserve(etas.size());
  for (double eta : etas) {
    auto q = quantizer_from_subtree(stats, threshold_subtree(stats, eta, cap), eta, cap, schedule);
    // Training distortion of the center-of-mass quantizer is the sum of leaf errors.
    double train = 0.0;
    for (const auto& leaf : q.leaves())
      if (const auto* node = stats.find(leaf)) train += node->stats.local_error;
    const std::size_t leaves = q.leaf_count();
    out.push_back(SweepEntry{eta, std::move(q), leaves, train});
  }
  return out;
}

}  // namespace recontree
