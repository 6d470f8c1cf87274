#include "recontree/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <stdexcept>
#include <thread>

#include "recontree/kmeans.hpp"
#include "recontree/reconstruction.hpp"
#include "recontree/rng.hpp"

namespace recontree {

namespace {

constexpr std::uint64_t kTrainStream = 1;
constexpr std::uint64_t kHoldoutStream = 2;

GeneratorSpec with_seed(GeneratorSpec spec, std::uint64_t seed) {
  spec.seed = seed;
  return spec;
}

// Runs task(i) for i in [0, count) on a small worker pool. Results must be
// written by index so the outcome does not depend on scheduling.
template <typename Task>
void parallel_for(std::size_t count, Task&& task) {
  const std::size_t workers = std::min<std::size_t>(count, std::max(1U, std::thread::hardware_concurrency()));
  if (workers <= 1) {
    for (std::size_t i = 0; i < count; ++i) task(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::atomic<bool> failed{false};
  std::vector<std::jthread> pool;
  for (std::size_t w = 0; w < workers; ++w)
    pool.emplace_back([&] {
      for (std::size_t i = next++; i < count && !failed; i = next++) {
        try {
          task(i);
        } catch (...) {
          if (!failed.exchange(true)) failure = std::current_exception();
        }
      }
    });
  pool.clear();
  if (failure) std::rethrow_exception(failure);
}

std::size_t default_holdout(std::size_t holdout_n, std::size_t n) { return holdout_n == 0 ? 10 * n : holdout_n; }

}  // namespace

std::vector<std::size_t> RateExperimentConfig::default_n_grid() {
  std::vector<std::size_t> grid;
  for (int k = 8; k <= 16; ++k) grid.push_back(std::size_t{1} << k);
  return grid;
}

std::size_t RateExperimentConfig::effective_holdout_n() const {
  return holdout_n == 0 ? 10 * (n_grid.empty() ? 0 : n_grid.back()) : holdout_n;
}

void RateExperimentConfig::validate() const {
  generator.validate();
  if (n_grid.empty()) throw std::invalid_argument("n_grid must not be empty");
  for (std::size_t i = 0; i < n_grid.size(); ++i) {
    if (n_grid[i] < 2) throw std::invalid_argument("n_grid entries must be at least 2");
    if (i > 0 && n_grid[i] <= n_grid[i - 1]) throw std::invalid_argument("n_grid must be strictly increasing");
  }
  if (trials < 1) throw std::invalid_argument("trials must be at least 1");
  if (!(gamma > 0.0) || !(beta > 0.0)) throw std::invalid_argument("gamma and beta must be positive");
  if (!(eta_scale > 0.0)) throw std::invalid_argument("eta_scale must be positive");
}

double least_squares_slope(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size() || x.size() < 2) throw std::invalid_argument("slope fit needs at least two points");
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= static_cast<double>(x.size());
  my /= static_cast<double>(y.size());
  double sxy = 0.0, sxx = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxy += (x[i] - mx) * (y[i] - my);
    sxx += (x[i] - mx) * (x[i] - mx);
  }
  if (sxx == 0.0) throw std::invalid_argument("slope fit needs distinct abscissae");
  return sxy / sxx;
}

std::vector<double> geometric_grid(double from, double to, std::size_t count) {
  if (!(from > 0.0) || !(to > 0.0) || count < 1) throw std::invalid_argument("geometric grid needs positive ends");
  if (count == 1) return {from};
  std::vector<double> out(count);
  const double lf = std::log(from), lt = std::log(to);
  for (std::size_t i = 0; i < count; ++i)
    out[i] = std::exp(lf + (lt - lf) * static_cast<double>(i) / static_cast<double>(count - 1));
  out.front() = from;
  out.back() = to;
  return out;
}

RateResult run_rate_experiment(const RateExperimentConfig& cfg) {
  cfg.validate();
  const auto schedule = RateSchedule::for_dim(cfg.generator.ambient_dim, cfg.gamma, cfg.beta);
  const std::size_t holdout_n = cfg.effective_holdout_n();
  const auto trials = static_cast<std::size_t>(cfg.trials);

  struct Outcome {
    double distortion;
    std::size_t leaves;
  };
  std::vector<Outcome> outcomes(cfg.n_grid.size() * trials);
  parallel_for(outcomes.size(), [&](std::size_t task) {
    const std::size_t n = cfg.n_grid[task / trials];
    const std::size_t trial = task % trials;
    const auto train = sample(with_seed(cfg.generator, derive_seed(cfg.seed, n, trial, kTrainStream)), n);
    const auto holdout = sample(with_seed(cfg.generator, derive_seed(cfg.seed, n, trial, kHoldoutStream)), holdout_n);
    const auto q = fit(train, cfg.eta_scale * schedule.eta(n), schedule);
    outcomes[task] = {empirical_distortion(q, holdout), q.leaf_count()};
  });

  RateResult result{{}, 0.0};
  std::vector<double> log_rate, log_distortion;
  for (std::size_t g = 0; g < cfg.n_grid.size(); ++g) {
    const std::size_t n = cfg.n_grid[g];
    double mean = 0.0, leaves = 0.0;
    for (std::size_t t = 0; t < trials; ++t) {
      mean += outcomes[g * trials + t].distortion;
      leaves += static_cast<double>(outcomes[g * trials + t].leaves);
    }
    mean /= static_cast<double>(trials);
    leaves /= static_cast<double>(trials);
    double var = 0.0;
    for (std::size_t t = 0; t < trials; ++t) {
      const double d = outcomes[g * trials + t].distortion - mean;
      var += d * d;
    }
    const double sd = trials > 1 ? std::sqrt(var / static_cast<double>(trials - 1)) : 0.0;
    result.rows.push_back({n, cfg.eta_scale * schedule.eta(n), schedule.depth(n), leaves, mean, sd});
    const double nn = static_cast<double>(n);
    log_rate.push_back(std::log(std::log(nn) / nn));
    log_distortion.push_back(std::log(mean));
  }
  result.fitted_slope = log_rate.size() >= 2 ? least_squares_slope(log_rate, log_distortion) : 0.0;
  return result;
}

std::vector<EtaSweepRow> run_eta_sweep_experiment(const GeneratorSpec& generator, std::size_t n,
                                                  std::span<const double> etas, double gamma, double beta,
                                                  std::size_t holdout_n) {
  const auto schedule = RateSchedule::for_dim(generator.ambient_dim, gamma, beta);
  const auto train = sample(generator, n);
  const auto holdout =
      sample(with_seed(generator, derive_seed(generator.seed, n, 0, kHoldoutStream)), default_holdout(holdout_n, n));
  std::vector<EtaSweepRow> rows;
  for (auto& entry : sweep(train, etas, schedule))
    rows.push_back({entry.eta, entry.leaf_count, entry.train_distortion, empirical_distortion(entry.quantizer, holdout)});
  return rows;
}

ApproxResult run_approximation_trend(const DiscreteDistribution& dist, std::span<const double> etas,
                                     std::optional<int> intrinsic_dim) {
  const auto table = oracle_stats(dist, default_oracle_depth_cap(dist));
  const double s = 1.0 / static_cast<double>(intrinsic_dim.value_or(dist.dim()));
  ApproxResult result{{}, 0.0, 4.0 * s / (2.0 * s + 1.0)};
  std::vector<double> log_eta, log_error;
  for (double eta : etas) {
    const auto q = oracle_quantizer(table, eta);
    const bool in_fit = q.expected_distortion > 0.0;
    result.rows.push_back({eta, q.expected_distortion, q.leaves.size(), in_fit});
    if (in_fit) {
      log_eta.push_back(std::log(eta));
      log_error.push_back(std::log(q.expected_distortion));
    }
  }
  result.fitted_slope = log_eta.size() >= 2 ? least_squares_slope(log_eta, log_error) : 0.0;
  return result;
}

std::vector<BaselineRow> run_baseline_comparison(const GeneratorSpec& generator, std::size_t n,
                                                 std::span<const double> etas, double gamma, double beta,
                                                 std::size_t holdout_n, std::uint64_t kmeans_seed) {
  const auto schedule = RateSchedule::for_dim(generator.ambient_dim, gamma, beta);
  const auto train = sample(generator, n);
  const auto holdout =
      sample(with_seed(generator, derive_seed(generator.seed, n, 0, kHoldoutStream)), default_holdout(holdout_n, n));
  std::vector<BaselineRow> rows;
  for (auto& entry : sweep(train, etas, schedule)) {
    const std::size_t k = std::min(entry.leaf_count, train.size());
    const auto model = kmeans_fit(train, k, derive_seed(kmeans_seed, k));
    rows.push_back({entry.eta, entry.leaf_count, entry.train_distortion, empirical_distortion(entry.quantizer, holdout),
                    k, model.final_objective, kmeans_distortion(model, holdout), model.iterations_run});
  }
  return rows;
}

CsvTable to_csv(const RateResult& result) {
  CsvTable t({"n", "eta_n", "j_n", "leaf_count", "holdout_distortion_mean", "holdout_distortion_std"});
  for (const auto& r : result.rows)
    t.add_row({std::to_string(r.n), format_double(r.eta_n), std::to_string(r.j_n), format_double(r.leaf_count),
               format_double(r.holdout_distortion_mean), format_double(r.holdout_distortion_std)});
  return t;
}

CsvTable to_csv(std::span<const EtaSweepRow> rows) {
  CsvTable t({"eta", "leaf_count", "train_distortion", "holdout_distortion"});
  for (const auto& r : rows)
    t.add_row({format_double(r.eta), std::to_string(r.leaf_count), format_double(r.train_distortion),
               format_double(r.holdout_distortion)});
  return t;
}

CsvTable to_csv(const ApproxResult& result) {
  CsvTable t({"eta", "approximation_error", "leaf_count", "in_fit"});
  for (const auto& r : result.rows)
    t.add_row({format_double(r.eta), format_double(r.approximation_error), std::to_string(r.leaf_count),
               r.in_fit ? "1" : "0"});
  return t;
}

CsvTable to_csv(std::span<const BaselineRow> rows) {
  CsvTable t({"eta", "leaf_count", "tree_train_distortion", "tree_holdout_distortion", "kmeans_k",
              "kmeans_train_distortion", "kmeans_holdout_distortion", "kmeans_iterations"});
  for (const auto& r : rows)
    t.add_row({format_double(r.eta), std::to_string(r.leaf_count), format_double(r.tree_train_distortion),
               format_double(r.tree_holdout_distortion), std::to_string(r.kmeans_k),
               format_double(r.kmeans_train_distortion), format_double(r.kmeans_holdout_distortion),
               std::to_string(r.kmeans_iterations)});
  return t;
}

}  // namespace recontree
