#pragma once

// Naive reference computations used as independent oracles in the tests.
// Cells are found by flooring each coordinate; sums are plain loops in long
// double so they share no code path with the library.

#include <cmath>
#include <cstdint>
#include <map>
#include <vector>

namespace brute {

struct Cell {
  int depth;
  std::vector<std::uint64_t> index;
  auto operator<=>(const Cell&) const = default;
};

inline Cell cell_of(const double* x, int dim, int depth) {
  Cell c{depth, {}};
  for (int k = 0; k < dim; ++k) c.index.push_back(static_cast<std::uint64_t>(std::floor(std::ldexp(x[k], depth))));
  return c;
}

inline bool inside(const Cell& c, const double* x, int dim) { return cell_of(x, dim, c.depth) == c; }

struct Stats {
  std::size_t count = 0;
  std::vector<long double> mean;
  long double error = 0;  // (1/n_total) sum |x - mean|^2
};

// Points are row-major; weights default to 1/n each.
inline Stats stats(const std::vector<double>& pts, int dim, const Cell& c, const std::vector<double>* weights = nullptr) {
  const std::size_t n = pts.size() / static_cast<std::size_t>(dim);
  Stats s;
  s.mean.assign(static_cast<std::size_t>(dim), 0);
  long double mass = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const double* x = &pts[i * static_cast<std::size_t>(dim)];
    if (!inside(c, x, dim)) continue;
    const long double w = weights ? (*weights)[i] : 1.0L / n;
    ++s.count;
    mass += w;
    for (int k = 0; k < dim; ++k) s.mean[static_cast<std::size_t>(k)] += w * x[k];
  }
  if (s.count == 0) return s;
  for (auto& m : s.mean) m /= mass;
  for (std::size_t i = 0; i < n; ++i) {
    const double* x = &pts[i * static_cast<std::size_t>(dim)];
    if (!inside(c, x, dim)) continue;
    const long double w = weights ? (*weights)[i] : 1.0L / n;
    for (int k = 0; k < dim; ++k) {
      const long double d = x[k] - s.mean[static_cast<std::size_t>(k)];
      s.error += w * d * d;
    }
  }
  return s;
}

inline std::vector<Cell> children(const Cell& c) {
  const int dim = static_cast<int>(c.index.size());
  std::vector<Cell> out;
  for (std::uint64_t m = 0; m < (std::uint64_t{1} << dim); ++m) {
    Cell ch{c.depth + 1, c.index};
    for (int k = 0; k < dim; ++k) ch.index[static_cast<std::size_t>(k)] = 2 * c.index[static_cast<std::size_t>(k)] + ((m >> k) & 1U);
    out.push_back(ch);
  }
  return out;
}

// Squared gain sum_J mass_J |mean_J - mean_I|^2 (mass_J = n_J / n or rho_J).
inline long double gain2(const std::vector<double>& pts, int dim, const Cell& c,
                         const std::vector<double>* weights = nullptr) {
  const auto parent = stats(pts, dim, c, weights);
  if (parent.count == 0) return 0;
  const std::size_t n = pts.size() / static_cast<std::size_t>(dim);
  long double total = 0;
  for (const auto& ch : children(c)) {
    const auto s = stats(pts, dim, ch, weights);
    if (s.count == 0) continue;
    long double mass = 0;
    for (std::size_t i = 0; i < n; ++i)
      if (inside(ch, &pts[i * static_cast<std::size_t>(dim)], dim)) mass += weights ? (*weights)[i] : 1.0L / n;
    long double d2 = 0;
    for (int k = 0; k < dim; ++k) {
      const long double d = s.mean[static_cast<std::size_t>(k)] - parent.mean[static_cast<std::size_t>(k)];
      d2 += d * d;
    }
    total += mass * d2;
  }
  return total;
}

}  // namespace brute
