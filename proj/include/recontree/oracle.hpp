#pragma once

// Exact population quantities for finitely supported distributions.
//
// For a weighted atom set, every cell statistic is a finite weighted sum:
//   mass   rho_I = sum of weights in I
//   center c_I   = weighted mean in I (cube center when rho_I = 0)
//   error  E_I   = sum_{x in I} w |x - c_I|^2
//   gain   e_I   = sqrt(sum_{J child of I} rho_J |c_J - c_I|^2)
// These serve as ground truth for the empirical algorithm.

#include <cstddef>
#include <map>
#include <optional>
#include <span>
#include <vector>

#include "recontree/dataset.hpp"
#include "recontree/partition_tree.hpp"

namespace recontree {

class DiscreteDistribution {
 public:
  /// Atoms are row-major points in [0,1)^D. Weights must be positive and sum
  /// to 1 within 1e-12. Coincident atoms are merged.
  DiscreteDistribution(int dim, std::vector<double> points, std::vector<double> weights);

  /// Empirical measure of a dataset (weight = multiplicity / n).
  static DiscreteDistribution from_dataset(const Dataset& data);
  /// 2^{level D} equal-weight atoms at the centers of the depth-`level` grid.
  static DiscreteDistribution uniform_grid(int dim, int level);

  int dim() const { return dim_; }
  std::size_t size() const { return weights_.size(); }
  std::span<const double> atom(std::size_t i) const {
    return {points_.data() + i * static_cast<std::size_t>(dim_), static_cast<std::size_t>(dim_)};
  }
  double weight(std::size_t i) const { return weights_[i]; }

 private:
  int dim_;
  std::vector<double> points_;
  std::vector<double> weights_;
};

struct OracleCell {
  double mass = 0.0;
  std::vector<double> center;
  double error = 0.0;
  /// Present above the depth cap.
  std::optional<double> gain;
};

class OracleTable {
 public:
  const TreeConfig& config() const { return config_; }
  int depth_cap() const { return depth_cap_; }
  /// Every cell of positive mass, keyed and ordered by CellId.
  const std::map<CellId, OracleCell>& cells() const { return cells_; }
  /// Statistics of any cell up to the cap; zero-mass cells get the cube center.
  OracleCell lookup(const CellId& cell) const;

 private:
  friend OracleTable oracle_stats(const DiscreteDistribution&, int, const TreeConfig&);
  explicit OracleTable(TreeConfig cfg) : config_(cfg) {}

  TreeConfig config_;
  int depth_cap_ = 0;
  std::map<CellId, OracleCell> cells_;
};

/// Smallest depth at which all atoms lie in distinct cells.
int isolation_depth(const DiscreteDistribution& dist, int max_depth = kDefaultMaxDepth);
/// isolation_depth + 1
int default_oracle_depth_cap(const DiscreteDistribution& dist, int max_depth = kDefaultMaxDepth);

OracleTable oracle_stats(const DiscreteDistribution& dist, int depth_cap, const TreeConfig& cfg);
OracleTable oracle_stats(const DiscreteDistribution& dist, int depth_cap);

/// Ancestor closure of every cell with gain >= eta. Throws CapTooSmallError
/// unless every cell at the cap has error < eta^2, which rules out marks
/// below the cap.
Subtree oracle_subtree(const OracleTable& table, double eta);
Subtree oracle_subtree(const DiscreteDistribution& dist, double eta, int depth_cap);

struct OracleQuantizer {
  Subtree subtree;
  std::vector<CellId> leaves;
  std::vector<std::vector<double>> codes;
  /// sum over leaves of E_I: the exact expected distortion.
  double expected_distortion = 0.0;
};

OracleQuantizer oracle_quantizer(const OracleTable& table, double eta);

/// Expected distortion of the population quantizer at threshold eta.
double approximation_error(const DiscreteDistribution& dist, double eta);

struct LeafCountRow {
  double eta;
  std::size_t subtree_size;
  std::size_t leaf_count;
};

std::vector<LeafCountRow> leaf_count_bound_monitor(const DiscreteDistribution& dist, std::span<const double> etas);

}  // namespace recontree
