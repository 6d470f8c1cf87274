#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "recontree/data_gen.hpp"
#include "recontree/errors.hpp"
#include "recontree/experiment.hpp"
#include "recontree/kmeans.hpp"
#include "recontree/oracle.hpp"
#include "recontree/reconstruction.hpp"

namespace py = pybind11;
using namespace recontree;

namespace {

using Array = py::array_t<double, py::array::c_style | py::array::forcecast>;

Dataset to_dataset(const Array& points) {
  if (points.ndim() != 2) throw py::value_error("points must be a 2-d array of shape (n, D)");
  const auto* p = points.data();
  return Dataset(static_cast<int>(points.shape(1)), std::vector<double>(p, p + points.size()));
}

Array to_array(const Dataset& data) {
  Array out({static_cast<py::ssize_t>(data.size()), static_cast<py::ssize_t>(data.dim())});
  std::copy(data.values().begin(), data.values().end(), out.mutable_data());
  return out;
}

GeneratorSpec make_spec(const std::string& kind, int dim, std::uint64_t seed, double p1, double p2) {
  GeneratorSpec spec;
  spec.kind = parse_generator_kind(kind);
  spec.ambient_dim = dim;
  spec.seed = seed;
  spec.p1 = p1;
  spec.p2 = p2;
  return spec;
}

py::tuple cell_tuple(const CellId& c) { return py::make_tuple(c.depth, c.index); }

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Reconstruction trees on dyadic partitions";

  py::register_exception<DomainError>(m, "DomainError", PyExc_ValueError);
  py::register_exception<StructureError>(m, "StructureError", PyExc_ValueError);
  py::register_exception<DepthLimitError>(m, "DepthLimitError", PyExc_ValueError);
  py::register_exception<CapTooSmallError>(m, "CapTooSmallError", PyExc_RuntimeError);
  py::register_exception<FormatError>(m, "FormatError", PyExc_ValueError);

  py::class_<RateSchedule>(m, "RateSchedule")
      .def(py::init(&RateSchedule::for_dim), py::arg("dim"), py::arg("gamma") = 1.5, py::arg("beta") = 1.0)
      .def_readonly("gamma", &RateSchedule::gamma)
      .def_readonly("beta", &RateSchedule::beta)
      .def_readonly("dim", &RateSchedule::dim)
      .def("depth", &RateSchedule::depth, py::arg("n"))
      .def("eta", &RateSchedule::eta, py::arg("n"))
      .def("c_a", &RateSchedule::c_a);

  py::class_<Quantizer>(m, "Quantizer")
      .def_property_readonly("dim", &Quantizer::dim)
      .def_property_readonly("eta", &Quantizer::eta)
      .def_property_readonly("depth_cap", &Quantizer::depth_cap)
      .def_property_readonly("leaf_count", &Quantizer::leaf_count)
      .def_property_readonly("leaves",
                             [](const Quantizer& q) {
                               py::list out;
                               for (const auto& c : q.leaves()) out.append(cell_tuple(c));
                               return out;
                             })
      .def_property_readonly("codes",
                             [](const Quantizer& q) {
                               Array out({static_cast<py::ssize_t>(q.leaf_count()), static_cast<py::ssize_t>(q.dim())});
                               auto* dst = out.mutable_data();
                               for (const auto& code : q.codes()) dst = std::copy(code.begin(), code.end(), dst);
                               return out;
                             })
      .def("to_json", &quantizer_to_json)
      .def_static("from_json", &quantizer_from_json, py::arg("text"))
      .def("save", [](const Quantizer& q, const std::string& path) { save_quantizer(q, path); })
      .def_static("load", &load_quantizer, py::arg("path"));

  m.def(
      "fit",
      [](const Array& points, std::optional<double> eta, double gamma, double beta, int max_depth) {
        const auto data = to_dataset(points);
        const auto schedule = RateSchedule::for_dim(data.dim(), gamma, beta);
        py::gil_scoped_release release;
        return eta ? fit(data, *eta, schedule, max_depth) : fit(data, schedule, max_depth);
      },
      py::arg("points"), py::arg("eta") = py::none(), py::arg("gamma") = 1.5, py::arg("beta") = 1.0,
      py::arg("max_depth") = kDefaultMaxDepth,
      "Fit a quantizer; eta defaults to the schedule threshold for n points.");

  m.def(
      "encode",
      [](const Quantizer& q, const Array& points) {
        const auto data = to_dataset(points);
        py::list out;
        for (std::size_t i = 0; i < data.size(); ++i) out.append(cell_tuple(encode(q, data.point(i))));
        return out;
      },
      py::arg("quantizer"), py::arg("points"), "Leaf (depth, index) of every point.");

  m.def(
      "decode",
      [](const Quantizer& q, int depth, const std::vector<std::uint64_t>& index) {
        const auto code = decode(q, CellId{depth, index});
        return std::vector<double>(code.begin(), code.end());
      },
      py::arg("quantizer"), py::arg("depth"), py::arg("index"));

  m.def(
      "distortion", [](const Quantizer& q, const Array& points) { return empirical_distortion(q, to_dataset(points)); },
      py::arg("quantizer"), py::arg("points"));

  m.def(
      "sweep",
      [](const Array& points, const std::vector<double>& etas, double gamma, double beta) {
        const auto data = to_dataset(points);
        std::vector<SweepEntry> entries;
        {
          py::gil_scoped_release release;
          entries = sweep(data, etas, RateSchedule::for_dim(data.dim(), gamma, beta));
        }
        py::list out;
        for (auto& e : entries)
          out.append(py::dict(py::arg("eta") = e.eta, py::arg("leaf_count") = e.leaf_count,
                              py::arg("train_distortion") = e.train_distortion,
                              py::arg("quantizer") = std::move(e.quantizer)));
        return out;
      },
      py::arg("points"), py::arg("etas"), py::arg("gamma") = 1.5, py::arg("beta") = 1.0);

  m.def(
      "sample",
      [](const std::string& kind, int dim, std::size_t n, std::uint64_t seed, double p1, double p2) {
        return to_array(sample(make_spec(kind, dim, seed, p1, p2), n));
      },
      py::arg("kind"), py::arg("dim"), py::arg("n"), py::arg("seed") = 0, py::arg("p1") = 1.0, py::arg("p2") = 1.0);

  m.def(
      "approximation_error",
      [](const Array& atoms, const Array& weights, double eta) {
        if (atoms.ndim() != 2 || weights.ndim() != 1 || weights.shape(0) != atoms.shape(0))
          throw py::value_error("atoms must be (m, D) and weights (m,)");
        DiscreteDistribution dist(static_cast<int>(atoms.shape(1)),
                                  std::vector<double>(atoms.data(), atoms.data() + atoms.size()),
                                  std::vector<double>(weights.data(), weights.data() + weights.size()));
        return approximation_error(dist, eta);
      },
      py::arg("atoms"), py::arg("weights"), py::arg("eta"));

  m.def(
      "kmeans",
      [](const Array& points, std::size_t k, std::uint64_t seed) {
        const auto model = kmeans_fit(to_dataset(points), k, seed);
        return py::dict(py::arg("centers") = model.centers, py::arg("objective") = model.final_objective,
                        py::arg("history") = model.objective_history, py::arg("iterations") = model.iterations_run);
      },
      py::arg("points"), py::arg("k"), py::arg("seed") = 0);

  m.def(
      "rate_experiment",
      [](const std::string& kind, int dim, const std::vector<std::size_t>& n_grid, int trials, std::uint64_t seed,
         std::size_t holdout_n, double gamma, double beta, double eta_scale) {
        RateExperimentConfig cfg;
        cfg.generator = make_spec(kind, dim, 0, 1.0, 1.0);
        cfg.n_grid = n_grid;
        cfg.trials = trials;
        cfg.seed = seed;
        cfg.holdout_n = holdout_n;
        cfg.gamma = gamma;
        cfg.beta = beta;
        cfg.eta_scale = eta_scale;
        RateResult result;
        {
          py::gil_scoped_release release;
          result = run_rate_experiment(cfg);
        }
        py::list rows;
        for (const auto& r : result.rows)
          rows.append(py::dict(py::arg("n") = r.n, py::arg("eta_n") = r.eta_n, py::arg("j_n") = r.j_n,
                               py::arg("leaf_count") = r.leaf_count,
                               py::arg("holdout_distortion_mean") = r.holdout_distortion_mean,
                               py::arg("holdout_distortion_std") = r.holdout_distortion_std));
        return py::make_tuple(rows, result.fitted_slope);
      },
      py::arg("kind"), py::arg("dim"), py::arg("n_grid") = RateExperimentConfig::default_n_grid(),
      py::arg("trials") = 1, py::arg("seed") = 0, py::arg("holdout_n") = 0, py::arg("gamma") = 1.5,
      py::arg("beta") = 1.0, py::arg("eta_scale") = 1.0,
      "Returns (rows, fitted_slope).");

  m.def(
      "approximation_trend",
      [](int dim, int grid_level, const std::vector<double>& etas) {
        const auto result = run_approximation_trend(DiscreteDistribution::uniform_grid(dim, grid_level), etas);
        py::list rows;
        for (const auto& r : result.rows)
          rows.append(py::dict(py::arg("eta") = r.eta, py::arg("approximation_error") = r.approximation_error,
                               py::arg("leaf_count") = r.leaf_count, py::arg("in_fit") = r.in_fit));
        return py::make_tuple(rows, result.fitted_slope, result.target_slope);
      },
      py::arg("dim"), py::arg("grid_level"), py::arg("etas"), "Uniform atom grid; returns (rows, slope, target).");
}
