#pragma once

// Reconstruction trees: threshold the refinement gains of the dyadic tree,
// keep the smallest subtree containing every cell whose gain reaches the
// threshold, and quantize each point to the center of mass of the outer leaf
// that contains it.

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "recontree/cell_stats.hpp"
#include "recontree/dataset.hpp"
#include "recontree/partition_tree.hpp"

namespace recontree {

/// Data-size dependent depth truncation and threshold.
struct RateSchedule {
  double gamma = 1.5;
  double beta = 1.0;
  int dim = 1;

  static RateSchedule for_dim(int dim, double gamma = 1.5, double beta = 1.0);

  std::size_t branching() const { return std::size_t{1} << dim; }
  /// floor(gamma ln n / ln a)
  int depth(std::size_t n) const;
  /// 1 / (128 (a + 1))
  double c_a() const;
  /// sqrt((gamma + beta) ln n / (c_a n))
  double eta(std::size_t n) const;

  friend bool operator==(const RateSchedule&, const RateSchedule&) = default;
};

/// Outer-leaf partition plus one code vector per leaf. Immutable.
class Quantizer {
 public:
  Quantizer(int dim, std::vector<CellId> leaves, std::vector<std::vector<double>> codes, double eta, int depth_cap,
            RateSchedule schedule);

  int dim() const { return dim_; }
  double eta() const { return eta_; }
  int depth_cap() const { return depth_cap_; }
  const RateSchedule& schedule() const { return schedule_; }

  std::size_t leaf_count() const { return leaves_.size(); }
  /// Sorted by (depth, index).
  const std::vector<CellId>& leaves() const { return leaves_; }
  std::span<const double> code(std::size_t leaf) const { return codes_[leaf]; }
  const std::vector<std::vector<double>>& codes() const { return codes_; }
  int min_leaf_depth() const { return min_depth_; }
  int max_leaf_depth() const { return max_depth_; }

  std::optional<std::size_t> leaf_position(const CellId& cell) const;

 private:
  int dim_;
  std::vector<CellId> leaves_;
  std::vector<std::vector<double>> codes_;
  double eta_;
  int depth_cap_;
  RateSchedule schedule_;
  int min_depth_ = 0;
  int max_depth_ = 0;
  std::unordered_map<CellId, std::size_t, CellIdHash> position_;
};

/// Smallest subtree containing every cell of depth < min(depth_cap,
/// stats.depth_cap()) with gain >= eta; the root alone if there is none.
Subtree threshold_subtree(const StatsTable& stats, double eta, int depth_cap);

/// Quantizer on the outer leaves of `subtree`, with empirical centers (cube
/// centers for empty leaves).
Quantizer quantizer_from_subtree(const StatsTable& stats, const Subtree& subtree, double eta, int depth_cap,
                                 const RateSchedule& schedule);

Quantizer fit(const Dataset& data, double eta, const RateSchedule& schedule, int max_depth = kDefaultMaxDepth);
/// Fit with the schedule's own threshold eta(n).
Quantizer fit(const Dataset& data, const RateSchedule& schedule, int max_depth = kDefaultMaxDepth);

/// Single-cell quantizer: the root is the only leaf and the code is the global mean.
Quantizer root_quantizer(const Dataset& data);

CellId encode(const Quantizer& q, std::span<const double> point);
std::span<const double> decode(const Quantizer& q, const CellId& leaf);
/// Leaf position of `point` in q.leaves().
std::size_t encode_position(const Quantizer& q, std::span<const double> point);

/// (1/n) sum |x_i - P(x_i)|^2
double empirical_distortion(const Quantizer& q, const Dataset& data);

struct SweepEntry {
  double eta;
  Quantizer quantizer;
  std::size_t leaf_count;
  double train_distortion;
};

/// One quantizer per threshold, sharing a single statistics pass.
std::vector<SweepEntry> sweep(const Dataset& data, std::span<const double> etas, const RateSchedule& schedule,
                              int max_depth = kDefaultMaxDepth);

/// Versioned JSON codebook. Code vectors use shortest round-trip decimals.
std::string quantizer_to_json(const Quantizer& q);
Quantizer quantizer_from_json(const std::string& text);
void save_quantizer(const Quantizer& q, const std::string& path);
Quantizer load_quantizer(const std::string& path);

}  // namespace recontree
