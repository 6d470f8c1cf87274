#pragma once

// Reproduction harness: distortion-vs-n under the data-driven schedule,
// distortion-vs-threshold sweeps, the exact approximation-error trend, and
// matched-size comparisons against k-means. Every result converts to a CSV
// table whose header names the row fields.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "recontree/csv.hpp"
#include "recontree/data_gen.hpp"
#include "recontree/oracle.hpp"

namespace recontree {

struct RateExperimentConfig {
  GeneratorSpec generator;
  std::vector<std::size_t> n_grid = default_n_grid();
  double gamma = 1.5;
  double beta = 1.0;
  /// 0 selects 10 * max(n_grid).
  std::size_t holdout_n = 0;
  int trials = 1;
  std::uint64_t seed = 0;
  /// Multiplies the schedule threshold; 1 runs the schedule as is.
  double eta_scale = 1.0;

  static std::vector<std::size_t> default_n_grid();
  std::size_t effective_holdout_n() const;
  void validate() const;
};

struct RateRow {
  std::size_t n;
  double eta_n;
  int j_n;
  double leaf_count;
  double holdout_distortion_mean;
  double holdout_distortion_std;
};

struct RateResult {
  std::vector<RateRow> rows;
  /// Least-squares slope of log(mean holdout distortion) against log(ln n / n).
  double fitted_slope;
};

RateResult run_rate_experiment(const RateExperimentConfig& cfg);

struct EtaSweepRow {
  double eta;
  std::size_t leaf_count;
  double train_distortion;
  double holdout_distortion;
};

/// Training sample from `generator`; holdout drawn from an independent stream
/// of the same distribution.
std::vector<EtaSweepRow> run_eta_sweep_experiment(const GeneratorSpec& generator, std::size_t n,
                                                  std::span<const double> etas, double gamma = 1.5,
                                                  double beta = 1.0, std::size_t holdout_n = 0);

struct ApproxRow {
  double eta;
  double approximation_error;
  std::size_t leaf_count;
  /// False for rows with zero error, which are left out of the slope fit.
  bool in_fit;
};

struct ApproxResult {
  std::vector<ApproxRow> rows;
  /// Least-squares slope of log E against log eta over rows in the fit.
  double fitted_slope;
  /// 4s/(2s+1) with s = 1/intrinsic_dim.
  double target_slope;
};

ApproxResult run_approximation_trend(const DiscreteDistribution& dist, std::span<const double> etas,
                                     std::optional<int> intrinsic_dim = std::nullopt);

struct BaselineRow {
  double eta;
  std::size_t leaf_count;
  double tree_train_distortion;
  double tree_holdout_distortion;
  std::size_t kmeans_k;
  double kmeans_train_distortion;
  double kmeans_holdout_distortion;
  int kmeans_iterations;
};

/// One row per threshold; k-means runs with k = min(leaf_count, n).
std::vector<BaselineRow> run_baseline_comparison(const GeneratorSpec& generator, std::size_t n,
                                                 std::span<const double> etas, double gamma = 1.5,
                                                 double beta = 1.0, std::size_t holdout_n = 0,
                                                 std::uint64_t kmeans_seed = 0);

/// Ordinary least-squares slope of y on x.
double least_squares_slope(std::span<const double> x, std::span<const double> y);

/// Geometric grid lo, lo*r, ..., hi with `count` points (descending when lo > hi).
std::vector<double> geometric_grid(double from, double to, std::size_t count);

CsvTable to_csv(const RateResult& result);
CsvTable to_csv(std::span<const EtaSweepRow> rows);
CsvTable to_csv(const ApproxResult& result);
CsvTable to_csv(std::span<const BaselineRow> rows);

}  // namespace recontree
