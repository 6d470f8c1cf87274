// Command-line front end for reconstruction-tree quantizers and experiments.

#include <CLI11.hpp>
#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "recontree/csv.hpp"
#include "recontree/data_gen.hpp"
#include "recontree/dataset_io.hpp"
#include "recontree/errors.hpp"
#include "recontree/experiment.hpp"
#include "recontree/reconstruction.hpp"

namespace {

using namespace recontree;

struct GeneratorArgs {
  std::string kind = "uniform_cube";
  int dim = 1;
  std::uint64_t seed = 0;
  double p1 = 1.0;
  double p2 = 1.0;
  std::uint64_t embedding_seed = GeneratorSpec{}.embedding_seed;

  void attach(CLI::App* app) {
    app->add_option("--kind", kind, "uniform_cube | density_cube | circle | sphere | swiss_roll")
        ->capture_default_str();
    app->add_option("--dim", dim, "Ambient dimension D")->capture_default_str();
    app->add_option("--seed", seed, "Sampling seed")->capture_default_str();
    app->add_option("--p1", p1, "density_cube lower density bound")->capture_default_str();
    app->add_option("--p2", p2, "density_cube upper density bound")->capture_default_str();
    app->add_option("--embedding-seed", embedding_seed, "Seed of the manifold embedding rotation")
        ->capture_default_str();
  }

  GeneratorSpec spec() const {
    GeneratorSpec s;
    s.kind = parse_generator_kind(kind);
    s.ambient_dim = dim;
    s.seed = seed;
    s.p1 = p1;
    s.p2 = p2;
    s.embedding_seed = embedding_seed;
    return s;
  }
};

struct EtaArgs {
  std::vector<double> etas;
  double eta_max = 1.0;
  double eta_min = 1.0 / 256.0;
  std::size_t count = 9;

  void attach(CLI::App* app) {
    app->add_option("--etas", etas, "Explicit thresholds (descending)")->delimiter(',');
    app->add_option("--eta-max", eta_max, "Largest threshold of a geometric grid")->capture_default_str();
    app->add_option("--eta-min", eta_min, "Smallest threshold of a geometric grid")->capture_default_str();
    app->add_option("--count", count, "Number of grid thresholds")->capture_default_str();
  }

  std::vector<double> values() const { return etas.empty() ? geometric_grid(eta_max, eta_min, count) : etas; }
};

void emit(const CsvTable& table, const std::string& path) {
  if (path.empty())
    table.write(std::cout);
  else
    table.write(path);
}

void write_json(const nlohmann::ordered_json& j, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open " + path + " for writing");
  out << j.dump(1) << "\n";
}

CellId parse_cell_row(const std::vector<double>& row, std::size_t first, int dim) {
  CellId c{static_cast<int>(row[first]), {}};
  for (int k = 0; k < dim; ++k) c.index.push_back(static_cast<std::uint64_t>(row[first + 1 + static_cast<std::size_t>(k)]));
  return c;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Reconstruction trees: multi-scale vector quantization on dyadic partitions"};
  app.set_config("--config", "", "TOML/INI file with option values (sections per subcommand)");
  app.require_subcommand(1);

  // sample
  auto* sample_cmd = app.add_subcommand("sample", "Draw a synthetic dataset");
  GeneratorArgs sample_gen;
  std::size_t sample_n = 1000;
  std::string sample_out;
  sample_gen.attach(sample_cmd);
  sample_cmd->add_option("--n", sample_n, "Number of points")->capture_default_str();
  sample_cmd->add_option("--output,-o", sample_out, "Dataset file (.csv writes cube coordinates as CSV)")->required();

  // fit
  auto* fit_cmd = app.add_subcommand("fit", "Fit a quantizer to a dataset");
  std::string fit_in, fit_out;
  std::optional<double> fit_eta;
  double fit_gamma = 1.5, fit_beta = 1.0;
  int fit_max_depth = kDefaultMaxDepth;
  fit_cmd->add_option("--input,-i", fit_in, "Dataset file or CSV")->required();
  fit_cmd->add_option("--output,-o", fit_out, "Quantizer JSON")->required();
  fit_cmd->add_option("--eta", fit_eta, "Threshold (default: schedule eta_n)");
  fit_cmd->add_option("--gamma", fit_gamma, "Depth schedule exponent")->capture_default_str();
  fit_cmd->add_option("--beta", fit_beta, "Threshold schedule exponent")->capture_default_str();
  fit_cmd->add_option("--max-depth", fit_max_depth, "Tree depth cap")->capture_default_str();

  // encode
  auto* enc_cmd = app.add_subcommand("encode", "Map points to quantizer leaves");
  std::string enc_q, enc_in, enc_out;
  enc_cmd->add_option("--quantizer,-q", enc_q, "Quantizer JSON")->required();
  enc_cmd->add_option("--input,-i", enc_in, "Dataset file or CSV")->required();
  enc_cmd->add_option("--output,-o", enc_out, "CSV of leaves (stdout if omitted)");

  // decode
  auto* dec_cmd = app.add_subcommand("decode", "Map leaves to code vectors");
  std::string dec_q, dec_in, dec_out;
  dec_cmd->add_option("--quantizer,-q", dec_q, "Quantizer JSON")->required();
  dec_cmd->add_option("--input,-i", dec_in, "CSV of leaves as written by encode")->required();
  dec_cmd->add_option("--output,-o", dec_out, "CSV of code vectors (stdout if omitted)");

  // distortion
  auto* dist_cmd = app.add_subcommand("distortion", "Mean squared quantization error on a dataset");
  std::string dist_q, dist_in, dist_out;
  dist_cmd->add_option("--quantizer,-q", dist_q, "Quantizer JSON")->required();
  dist_cmd->add_option("--input,-i", dist_in, "Dataset file or CSV")->required();
  dist_cmd->add_option("--output,-o", dist_out, "CSV (stdout if omitted)");

  // sweep
  auto* sweep_cmd = app.add_subcommand("sweep", "Fit a family of quantizers over thresholds");
  std::string sweep_in, sweep_out;
  double sweep_gamma = 1.5, sweep_beta = 1.0;
  EtaArgs sweep_etas;
  sweep_cmd->add_option("--input,-i", sweep_in, "Dataset file or CSV")->required();
  sweep_cmd->add_option("--output,-o", sweep_out, "CSV (stdout if omitted)");
  sweep_cmd->add_option("--gamma", sweep_gamma)->capture_default_str();
  sweep_cmd->add_option("--beta", sweep_beta)->capture_default_str();
  sweep_etas.attach(sweep_cmd);

  // rate-experiment
  auto* rate_cmd = app.add_subcommand("rate-experiment", "Holdout distortion versus n under the eta_n schedule");
  GeneratorArgs rate_gen;
  RateExperimentConfig rate_cfg;
  std::string rate_out, rate_summary;
  rate_gen.attach(rate_cmd);
  rate_cmd->add_option("--n-grid", rate_cfg.n_grid, "Increasing sample sizes")->delimiter(',');
  rate_cmd->add_option("--gamma", rate_cfg.gamma)->capture_default_str();
  rate_cmd->add_option("--beta", rate_cfg.beta)->capture_default_str();
  rate_cmd->add_option("--holdout-n", rate_cfg.holdout_n, "Holdout size (0: 10 * max n)")->capture_default_str();
  rate_cmd->add_option("--trials", rate_cfg.trials)->capture_default_str();
  rate_cmd->add_option("--experiment-seed", rate_cfg.seed, "Seed for train/holdout streams")->capture_default_str();
  rate_cmd->add_option("--eta-scale", rate_cfg.eta_scale, "Multiplier on eta_n")->capture_default_str();
  rate_cmd->add_option("--output,-o", rate_out, "CSV (stdout if omitted)");
  rate_cmd->add_option("--summary", rate_summary, "JSON file receiving the fitted slope");

  // approx-trend
  auto* approx_cmd = app.add_subcommand("approx-trend", "Exact approximation error of the population quantizer");
  int approx_dim = 1, approx_level = 12;
  std::optional<int> approx_intrinsic;
  std::string approx_in, approx_out, approx_summary;
  EtaArgs approx_etas;
  approx_cmd->add_option("--dim", approx_dim, "Dimension of the uniform atom grid")->capture_default_str();
  approx_cmd->add_option("--grid-level", approx_level, "Atoms at the centers of the depth-level grid")
      ->capture_default_str();
  approx_cmd->add_option("--input,-i", approx_in, "Use the empirical measure of this dataset instead");
  approx_cmd->add_option("--intrinsic-dim", approx_intrinsic, "Dimension for the target slope");
  approx_cmd->add_option("--output,-o", approx_out, "CSV (stdout if omitted)");
  approx_cmd->add_option("--summary", approx_summary, "JSON file receiving the fitted slope");
  approx_etas.attach(approx_cmd);

  // baseline
  auto* base_cmd = app.add_subcommand("baseline", "Reconstruction tree versus k-means at matched codebook sizes");
  GeneratorArgs base_gen;
  std::size_t base_n = 4096, base_holdout = 0;
  double base_gamma = 1.5, base_beta = 1.0;
  std::uint64_t base_kseed = 0;
  std::string base_out;
  EtaArgs base_etas;
  base_gen.attach(base_cmd);
  base_cmd->add_option("--n", base_n)->capture_default_str();
  base_cmd->add_option("--holdout-n", base_holdout, "Holdout size (0: 10 n)")->capture_default_str();
  base_cmd->add_option("--gamma", base_gamma)->capture_default_str();
  base_cmd->add_option("--beta", base_beta)->capture_default_str();
  base_cmd->add_option("--kmeans-seed", base_kseed)->capture_default_str();
  base_cmd->add_option("--output,-o", base_out, "CSV (stdout if omitted)");
  base_etas.attach(base_cmd);

  CLI11_PARSE(app, argc, argv);

  try {
    if (*sample_cmd) {
      const auto data = sample(sample_gen.spec(), sample_n);
      if (sample_out.size() >= 4 && sample_out.substr(sample_out.size() - 4) == ".csv") {
        std::vector<std::string> header;
        for (int k = 0; k < data.dim(); ++k) header.push_back("x_" + std::to_string(k));
        CsvTable t(header);
        for (std::size_t i = 0; i < data.size(); ++i) {
          std::vector<std::string> row;
          for (double v : data.point(i)) row.push_back(format_double(v));
          t.add_row(std::move(row));
        }
        t.write(sample_out);
      } else {
        write_dataset(data, sample_out);
      }
    } else if (*fit_cmd) {
      const auto data = load_points(fit_in);
      const auto schedule = RateSchedule::for_dim(data.dim(), fit_gamma, fit_beta);
      const auto q = fit_eta ? fit(data, *fit_eta, schedule, fit_max_depth) : fit(data, schedule, fit_max_depth);
      save_quantizer(q, fit_out);
      std::cout << "leaf_count=" << q.leaf_count() << " eta=" << format_double(q.eta())
                << " depth_cap=" << q.depth_cap() << "\n";
    } else if (*enc_cmd) {
      const auto q = load_quantizer(enc_q);
      const auto data = load_points(enc_in);
      std::vector<std::string> header{"point", "depth"};
      for (int k = 0; k < q.dim(); ++k) header.push_back("index_" + std::to_string(k));
      CsvTable t(header);
      for (std::size_t i = 0; i < data.size(); ++i) {
        const auto leaf = encode(q, data.point(i));
        std::vector<std::string> row{std::to_string(i), std::to_string(leaf.depth)};
        for (auto v : leaf.index) row.push_back(std::to_string(v));
        t.add_row(std::move(row));
      }
      emit(t, enc_out);
    } else if (*dec_cmd) {
      const auto q = load_quantizer(dec_q);
      const auto raw = read_csv(dec_in);
      const bool numbered = raw.dim == q.dim() + 2;
      if (!numbered && raw.dim != q.dim() + 1)
        throw FormatError("leaf CSV needs columns [point,] depth, index_0..index_" + std::to_string(q.dim() - 1));
      std::vector<std::string> header;
      for (int k = 0; k < q.dim(); ++k) header.push_back("x_" + std::to_string(k));
      CsvTable t(header);
      const auto width = static_cast<std::size_t>(raw.dim);
      for (std::size_t r = 0; r < raw.size(); ++r) {
        const std::vector<double> row(raw.values.begin() + static_cast<std::ptrdiff_t>(r * width),
                                      raw.values.begin() + static_cast<std::ptrdiff_t>((r + 1) * width));
        std::vector<std::string> out;
        for (double v : decode(q, parse_cell_row(row, numbered ? 1 : 0, q.dim()))) out.push_back(format_double(v));
        t.add_row(std::move(out));
      }
      emit(t, dec_out);
    } else if (*dist_cmd) {
      const auto q = load_quantizer(dist_q);
      const auto data = load_points(dist_in);
      CsvTable t({"n", "distortion"});
      t.add_row({std::to_string(data.size()), format_double(empirical_distortion(q, data))});
      emit(t, dist_out);
    } else if (*sweep_cmd) {
      const auto data = load_points(sweep_in);
      const auto etas = sweep_etas.values();
      const auto entries = sweep(data, etas, RateSchedule::for_dim(data.dim(), sweep_gamma, sweep_beta));
      CsvTable t({"eta", "leaf_count", "train_distortion"});
      for (const auto& e : entries)
        t.add_row({format_double(e.eta), std::to_string(e.leaf_count), format_double(e.train_distortion)});
      emit(t, sweep_out);
    } else if (*rate_cmd) {
      rate_cfg.generator = rate_gen.spec();
      const auto result = run_rate_experiment(rate_cfg);
      emit(to_csv(result), rate_out);
      std::cerr << "fitted_slope=" << format_double(result.fitted_slope) << "\n";
      if (!rate_summary.empty()) write_json({{"fitted_slope", result.fitted_slope}}, rate_summary);
    } else if (*approx_cmd) {
      const auto dist = approx_in.empty() ? DiscreteDistribution::uniform_grid(approx_dim, approx_level)
                                          : DiscreteDistribution::from_dataset(load_points(approx_in));
      const auto etas = approx_etas.values();
      const auto result = run_approximation_trend(dist, etas, approx_intrinsic);
      emit(to_csv(result), approx_out);
      std::cerr << "fitted_slope=" << format_double(result.fitted_slope)
                << " target_slope=" << format_double(result.target_slope) << "\n";
      if (!approx_summary.empty())
        write_json({{"fitted_slope", result.fitted_slope}, {"target_slope", result.target_slope}}, approx_summary);
    } else if (*base_cmd) {
      const auto etas = base_etas.values();
      const auto rows =
          run_baseline_comparison(base_gen.spec(), base_n, etas, base_gamma, base_beta, base_holdout, base_kseed);
      emit(to_csv(rows), base_out);
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
