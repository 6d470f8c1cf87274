#include "recontree/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>
#include <stdexcept>
#include <string>

#include "recontree/errors.hpp"

namespace recontree {

namespace {

// Neumaier compensated sum.
class CompensatedSum {
 public:
  void add(double x) {
    const double t = sum_ + x;
    if (std::abs(sum_) >= std::abs(x))
      carry_ += (sum_ - t) + x;
    else
      carry_ += (x - t) + sum_;
    sum_ = t;
  }
  double value() const { return sum_ + carry_; }

 private:
  double sum_ = 0.0;
  double carry_ = 0.0;
};

struct OracleBuilder {
  const DiscreteDistribution& dist;
  const TreeConfig& cfg;
  int cap;
  std::map<CellId, OracleCell>& out;

  // Fills `cell` from `atoms` (all inside it) and recurses into nonempty children.
  const OracleCell& visit(const CellId& cell, const std::vector<std::size_t>& atoms) {
    const auto dim = static_cast<std::size_t>(cfg.dim());
    OracleCell stats;
    CompensatedSum mass;
    std::vector<CompensatedSum> moment(dim);
    for (auto a : atoms) {
      const double w = dist.weight(a);
      mass.add(w);
      const auto x = dist.atom(a);
      for (std::size_t k = 0; k < dim; ++k) moment[k].add(w * x[k]);
    }
    stats.mass = mass.value();
    if (atoms.size() == 1) {
      // An isolated atom is its own center; skip the rounding of w x / w.
      const auto x = dist.atom(atoms.front());
      stats.center.assign(x.begin(), x.end());
    } else {
      stats.center.resize(dim);
      for (std::size_t k = 0; k < dim; ++k) stats.center[k] = moment[k].value() / stats.mass;
      CompensatedSum error;
      for (auto a : atoms) error.add(dist.weight(a) * squared_distance(dist.atom(a), stats.center));
      stats.error = error.value();
    }

    if (cell.depth < cap) {
      std::vector<std::vector<std::size_t>> split(cfg.branching());
      const double scale = std::ldexp(1.0, cell.depth + 1);
      for (auto a : atoms) {
        const auto x = dist.atom(a);
        std::size_t which = 0;
        for (std::size_t k = 0; k < dim; ++k)
          which |= (static_cast<std::uint64_t>(std::floor(x[k] * scale)) & 1U) << k;
        split[which].push_back(a);
      }
      // Child means as offsets from this cell's rounded center; see build_stats.
      std::vector<std::vector<double>> offsets;
      std::vector<double> masses;
      std::vector<CompensatedSum> drift(dim);
      for (std::size_t c = 0; c < split.size(); ++c) {
        if (split[c].empty()) continue;
        const auto& kid = visit(child(cell, c), split[c]);
        std::vector<CompensatedSum> off(dim);
        for (auto a : split[c]) {
          const auto x = dist.atom(a);
          for (std::size_t k = 0; k < dim; ++k) {
            off[k].add(dist.weight(a) * (x[k] - stats.center[k]));
            drift[k].add(dist.weight(a) * (x[k] - stats.center[k]));
          }
        }
        auto& o = offsets.emplace_back(dim);
        for (std::size_t k = 0; k < dim; ++k) o[k] = off[k].value() / kid.mass;
        masses.push_back(kid.mass);
      }
      CompensatedSum spread;
      for (std::size_t c = 0; c < offsets.size(); ++c) {
        double d2 = 0.0;
        for (std::size_t k = 0; k < dim; ++k) {
          const double d = offsets[c][k] - drift[k].value() / stats.mass;
          d2 += d * d;
        }
        spread.add(masses[c] * d2);
      }
      stats.gain = std::sqrt(spread.value());
    }
    return out.emplace(cell, std::move(stats)).first->second;
  }
};

}  // namespace

DiscreteDistribution::DiscreteDistribution(int dim, std::vector<double> points, std::vector<double> weights)
    : dim_(dim) {
  if (dim < 1) throw std::invalid_argument("distribution dimension must be positive");
  const auto d = static_cast<std::size_t>(dim);
  if (points.size() != weights.size() * d) throw std::invalid_argument("atom count does not match weight count");
  if (weights.empty()) throw std::invalid_argument("distribution needs at least one atom");
  CompensatedSum total;
  for (std::size_t i = 0; i < weights.size(); ++i) {
    if (!(weights[i] > 0.0) || !std::isfinite(weights[i]))
      throw std::invalid_argument("atom " + std::to_string(i) + " has non-positive weight");
    total.add(weights[i]);
    for (std::size_t k = 0; k < d; ++k) {
      const double x = points[i * d + k];
      if (!(x >= 0.0 && x < 1.0)) throw DomainError("atom " + std::to_string(i) + " outside [0,1)^D");
    }
  }
  if (std::abs(total.value() - 1.0) > 1e-12)
    throw std::invalid_argument("weights sum to " + std::to_string(total.value()) + ", expected 1");

  std::vector<std::size_t> order(weights.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  auto row = [&](std::size_t i) { return std::span<const double>(points.data() + i * d, d); };
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return std::lexicographical_compare(row(a).begin(), row(a).end(), row(b).begin(), row(b).end());
  });
  for (std::size_t pos = 0; pos < order.size(); ++pos) {
    const auto r = row(order[pos]);
    if (pos > 0 && std::equal(r.begin(), r.end(), row(order[pos - 1]).begin())) {
      weights_.back() += weights[order[pos]];
      continue;
    }
    points_.insert(points_.end(), r.begin(), r.end());
    weights_.push_back(weights[order[pos]]);
  }
}

DiscreteDistribution DiscreteDistribution::from_dataset(const Dataset& data) {
  if (data.empty()) throw std::invalid_argument("empty dataset has no empirical measure");
  const double w = 1.0 / static_cast<double>(data.size());
  return DiscreteDistribution(data.dim(), data.values(), std::vector<double>(data.size(), w));
}

DiscreteDistribution DiscreteDistribution::uniform_grid(int dim, int level) {
  if (dim < 1 || level < 0 || level * dim > 24) throw std::invalid_argument("uniform grid too large");
  const std::size_t side = std::size_t{1} << level;
  std::size_t count = 1;
  for (int k = 0; k < dim; ++k) count *= side;
  std::vector<double> points;
  points.reserve(count * static_cast<std::size_t>(dim));
  for (std::size_t i = 0; i < count; ++i) {
    std::size_t rest = i;
    for (int k = 0; k < dim; ++k) {
      points.push_back((static_cast<double>(rest % side) + 0.5) / static_cast<double>(side));
      rest /= side;
    }
  }
  return DiscreteDistribution(dim, std::move(points), std::vector<double>(count, 1.0 / static_cast<double>(count)));
}

int isolation_depth(const DiscreteDistribution& dist, int max_depth) {
  const TreeConfig cfg(dist.dim(), max_depth);
  for (int depth = 0; depth <= max_depth; ++depth) {
    std::set<CellId> seen;
    bool distinct = true;
    for (std::size_t i = 0; i < dist.size() && distinct; ++i) distinct = seen.insert(locate(cfg, dist.atom(i), depth)).second;
    if (distinct) return depth;
  }
  throw DepthLimitError("atoms are too close to separate within max_depth " + std::to_string(max_depth));
}

int default_oracle_depth_cap(const DiscreteDistribution& dist, int max_depth) {
  const int depth = isolation_depth(dist, max_depth) + 1;
  if (depth > max_depth) throw DepthLimitError("oracle depth cap exceeds max_depth");
  return depth;
}

OracleTable oracle_stats(const DiscreteDistribution& dist, int depth_cap) {
  return oracle_stats(dist, depth_cap, TreeConfig(dist.dim()));
}

OracleTable oracle_stats(const DiscreteDistribution& dist, int depth_cap, const TreeConfig& cfg) {
  if (dist.dim() != cfg.dim()) throw std::invalid_argument("distribution dimension does not match tree");
  if (depth_cap < 0 || depth_cap > cfg.max_depth())
    throw DepthLimitError("oracle depth cap " + std::to_string(depth_cap) + " exceeds max_depth");
  OracleTable table(cfg);
  table.depth_cap_ = depth_cap;
  std::vector<std::size_t> all(dist.size());
  std::iota(all.begin(), all.end(), std::size_t{0});
  OracleBuilder{dist, cfg, depth_cap, table.cells_}.visit(CellId::root(cfg.dim()), all);
  return table;
}

OracleCell OracleTable::lookup(const CellId& cell) const {
  validate_cell(config_, cell);
  if (cell.depth > depth_cap_) throw DepthLimitError("cell below the oracle depth cap");
  if (auto it = cells_.find(cell); it != cells_.end()) return it->second;
  OracleCell empty;
  empty.center = cell_center(cell);
  if (cell.depth < depth_cap_) empty.gain = 0.0;
  return empty;
}

Subtree oracle_subtree(const OracleTable& table, double eta) {
  if (!(eta >= 0.0)) throw std::invalid_argument("threshold must be non-negative");
  std::vector<CellId> marked;
  for (const auto& [id, cell] : table.cells()) {
    if (id.depth == table.depth_cap()) {
      // Descendant gains are bounded by this cell's error.
      if (cell.error >= eta * eta)
        throw CapTooSmallError("oracle depth cap " + std::to_string(table.depth_cap()) +
                               " cannot certify the subtree at eta = " + std::to_string(eta));
    } else if (*cell.gain >= eta) {
      marked.push_back(id);
    }
  }
  return smallest_subtree(table.config(), marked);
}

Subtree oracle_subtree(const DiscreteDistribution& dist, double eta, int depth_cap) {
  return oracle_subtree(oracle_stats(dist, depth_cap), eta);
}

OracleQuantizer oracle_quantizer(const OracleTable& table, double eta) {
  OracleQuantizer q{oracle_subtree(table, eta), {}, {}, 0.0};
  q.leaves = outer_leaves(table.config(), q.subtree).leaves();
  CompensatedSum total;
  for (const auto& leaf : q.leaves) {
    auto cell = table.lookup(leaf);
    total.add(cell.error);
    q.codes.push_back(std::move(cell.center));
  }
  q.expected_distortion = total.value();
  return q;
}

double approximation_error(const DiscreteDistribution& dist, double eta) {
  const auto table = oracle_stats(dist, default_oracle_depth_cap(dist));
  return oracle_quantizer(table, eta).expected_distortion;
}

std::vector<LeafCountRow> leaf_count_bound_monitor(const DiscreteDistribution& dist, std::span<const double> etas) {
  const auto table = oracle_stats(dist, default_oracle_depth_cap(dist));
  std::vector<LeafCountRow> rows;
  for (double eta : etas) {
    const auto subtree = oracle_subtree(table, eta);
    rows.push_back({eta, subtree.size(), outer_leaves(table.config(), subtree).size()});
  }
  return rows;
}

}  // namespace recontree
