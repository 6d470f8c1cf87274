#include "recontree/data_gen.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

#include "recontree/rng.hpp"

namespace recontree {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kRollStart = 1.5 * kPi;
constexpr double kRollEnd = 4.5 * kPi;
constexpr double kRollHalfHeight = 10.5;
// Keeps embedded manifolds strictly inside the open cube.
constexpr double kEmbedMargin = 1e-9;

double roll_arclength(double t) { return 0.5 * (t * std::sqrt(1.0 + t * t) + std::asinh(t)); }

// Inverts the arclength of the spiral (t cos t, t sin t) on [kRollStart, kRollEnd].
double roll_parameter(double u) {
  const double s0 = roll_arclength(kRollStart);
  const double target = s0 + u * (roll_arclength(kRollEnd) - s0);
  double t = kRollStart + u * (kRollEnd - kRollStart);
  for (int it = 0; it < 50; ++it) {
    const double step = (roll_arclength(t) - target) / std::sqrt(1.0 + t * t);
    t = std::clamp(t - step, kRollStart, kRollEnd);
    if (std::abs(step) < 1e-15 * t) break;
  }
  return t;
}

double bounding_radius(GeneratorKind kind) {
  if (kind == GeneratorKind::swiss_roll) return std::hypot(kRollEnd, kRollHalfHeight);
  return 1.0;
}

}  // namespace

GeneratorKind parse_generator_kind(std::string_view name) {
  if (name == "uniform_cube") return GeneratorKind::uniform_cube;
  if (name == "density_cube") return GeneratorKind::density_cube;
  if (name == "circle") return GeneratorKind::circle;
  if (name == "sphere") return GeneratorKind::sphere;
  if (name == "swiss_roll") return GeneratorKind::swiss_roll;
  throw std::invalid_argument("unknown generator kind '" + std::string(name) + "'");
}

std::string_view to_string(GeneratorKind kind) {
  switch (kind) {
    case GeneratorKind::uniform_cube: return "uniform_cube";
    case GeneratorKind::density_cube: return "density_cube";
    case GeneratorKind::circle: return "circle";
    case GeneratorKind::sphere: return "sphere";
    case GeneratorKind::swiss_roll: return "swiss_roll";
  }
  return "unknown";
}

int GeneratorSpec::intrinsic_dim() const {
  switch (kind) {
    case GeneratorKind::uniform_cube:
    case GeneratorKind::density_cube: return ambient_dim;
    case GeneratorKind::circle: return 1;
    case GeneratorKind::sphere:
    case GeneratorKind::swiss_roll: return 2;
  }
  return ambient_dim;
}

void GeneratorSpec::validate() const {
  if (ambient_dim < 1 || ambient_dim > 20) throw std::invalid_argument("ambient dimension must be in [1, 20]");
  if (noise != 0.0) throw std::invalid_argument("noise is reserved and must be 0");
  if (kind == GeneratorKind::density_cube && !(p1 > 0.0 && p1 <= p2 && std::isfinite(p2)))
    throw std::invalid_argument("density_cube needs 0 < p1 <= p2 < inf");
  const int needed = kind == GeneratorKind::circle ? 2 : (kind == GeneratorKind::sphere || kind == GeneratorKind::swiss_roll) ? 3 : 1;
  if (ambient_dim < needed)
    throw std::invalid_argument(std::string(to_string(kind)) + " needs ambient dimension >= " + std::to_string(needed));
}

std::vector<double> embedding_rotation(const GeneratorSpec& spec) {
  const int d = spec.ambient_dim;
  CounterRng rng(derive_seed(spec.embedding_seed, static_cast<std::uint64_t>(d), 0x707a7e));
  Eigen::MatrixXd g(d, d);
  for (int r = 0; r < d; ++r)
    for (int c = 0; c < d; ++c) g(r, c) = rng.normal();
  Eigen::HouseholderQR<Eigen::MatrixXd> qr(g);
  Eigen::MatrixXd q = qr.householderQ();
  const Eigen::MatrixXd r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (int c = 0; c < d; ++c)
    if (r(c, c) < 0) q.col(c) *= -1.0;
  std::vector<double> out(static_cast<std::size_t>(d * d));
  for (int r2 = 0; r2 < d; ++r2)
    for (int c = 0; c < d; ++c) out[static_cast<std::size_t>(r2 * d + c)] = q(r2, c);
  return out;
}

Dataset sample(const GeneratorSpec& spec, std::size_t n) {
  spec.validate();
  if (n == 0) throw std::invalid_argument("sample size must be positive");
  const auto d = static_cast<std::size_t>(spec.ambient_dim);
  CounterRng rng(derive_seed(spec.seed, static_cast<std::uint64_t>(spec.kind), d));
  std::vector<double> values;
  values.reserve(n * d);

  if (spec.kind == GeneratorKind::uniform_cube) {
    for (std::size_t i = 0; i < n * d; ++i) values.push_back(rng.uniform());
    return Dataset(spec.ambient_dim, std::move(values));
  }
  if (spec.kind == GeneratorKind::density_cube) {
    std::vector<double> x(d);
    while (values.size() < n * d) {
      double mean = 0.0;
      for (auto& v : x) {
        v = rng.uniform();
        mean += v;
      }
      mean /= static_cast<double>(d);
      const double f = spec.p1 + (spec.p2 - spec.p1) * mean;
      if (rng.uniform() * spec.p2 < f) values.insert(values.end(), x.begin(), x.end());
    }
    return Dataset(spec.ambient_dim, std::move(values));
  }

  const auto rot = embedding_rotation(spec);
  const double radius = bounding_radius(spec.kind);
  AffineMap map;
  map.scale = (1.0 - kEmbedMargin) / (2.0 * radius);
  map.offset.assign(d, -0.5 / map.scale);

  std::vector<double> local(3, 0.0);
  std::vector<double> ambient(d);
  for (std::size_t i = 0; i < n; ++i) {
    switch (spec.kind) {
      case GeneratorKind::circle: {
        const double theta = 2.0 * kPi * rng.uniform();
        local = {std::cos(theta), std::sin(theta), 0.0};
        break;
      }
      case GeneratorKind::sphere: {
        double norm = 0.0;
        do {
          for (int k = 0; k < 3; ++k) local[static_cast<std::size_t>(k)] = rng.normal();
          norm = std::sqrt(local[0] * local[0] + local[1] * local[1] + local[2] * local[2]);
        } while (norm < 1e-12);
        for (auto& v : local) v /= norm;
        break;
      }
      case GeneratorKind::swiss_roll: {
        const double t = roll_parameter(rng.uniform());
        const double h = (2.0 * rng.uniform() - 1.0) * kRollHalfHeight;
        local = {t * std::cos(t), h, t * std::sin(t)};
        break;
      }
      default: break;
    }
    const std::size_t m = spec.kind == GeneratorKind::circle ? 2 : 3;
    for (std::size_t r = 0; r < d; ++r) {
      double acc = 0.0;
      for (std::size_t c = 0; c < m; ++c) acc += rot[r * d + c] * local[c];
      ambient[r] = acc;
    }
    const auto y = map.apply(ambient);
    values.insert(values.end(), y.begin(), y.end());
  }
  return Dataset(spec.ambient_dim, std::move(values), std::move(map));
}

Dataset normalize(int dim, const std::vector<double>& values) {
  if (dim < 1) throw std::invalid_argument("dimension must be positive");
  const auto d = static_cast<std::size_t>(dim);
  if (values.empty() || values.size() % d != 0) throw std::invalid_argument("normalize needs a nonempty point set");
  std::vector<double> lo(d, std::numeric_limits<double>::infinity());
  std::vector<double> hi(d, -std::numeric_limits<double>::infinity());
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (!std::isfinite(values[i])) throw std::invalid_argument("normalize: non-finite coordinate");
    lo[i % d] = std::min(lo[i % d], values[i]);
    hi[i % d] = std::max(hi[i % d], values[i]);
  }
  double diam2 = 0.0;
  for (std::size_t k = 0; k < d; ++k) diam2 += (hi[k] - lo[k]) * (hi[k] - lo[k]);
  const double diam = std::sqrt(diam2);

  AffineMap map;
  if (diam == 0.0) {
    map.scale = 1.0;
    map.offset.resize(d);
    for (std::size_t k = 0; k < d; ++k) map.offset[k] = lo[k] - 0.5;
  } else {
    map.scale = 1.0 / diam;
    map.offset = lo;
  }
  const double top = std::nextafter(1.0, 0.0);
  std::vector<double> out(values.size());
  for (std::size_t i = 0; i < values.size(); ++i)
    out[i] = std::clamp((values[i] - map.offset[i % d]) * map.scale, 0.0, top);
  return Dataset(dim, std::move(out), std::move(map));
}

}  // namespace recontree
