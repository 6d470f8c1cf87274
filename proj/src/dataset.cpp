#include "recontree/dataset.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "recontree/errors.hpp"

namespace recontree {

std::vector<double> AffineMap::apply(std::span<const double> x) const {
  std::vector<double> y(x.size());
  for (std::size_t k = 0; k < x.size(); ++k) y[k] = (x[k] - offset[k]) * scale;
  return y;
}

std::vector<double> AffineMap::invert(std::span<const double> y) const {
  std::vector<double> x(y.size());
  for (std::size_t k = 0; k < y.size(); ++k) x[k] = y[k] / scale + offset[k];
  return x;
}

Dataset::Dataset(int dim, std::vector<double> values) : Dataset(dim, std::move(values), AffineMap::identity(dim)) {}

Dataset::Dataset(int dim, std::vector<double> values, AffineMap normalization)
    : dim_(dim), values_(std::move(values)), normalization_(std::move(normalization)) {
  if (dim < 1) throw std::invalid_argument("dataset dimension must be positive");
  if (values_.size() % static_cast<std::size_t>(dim) != 0)
    throw std::invalid_argument("dataset value count " + std::to_string(values_.size()) +
                                " is not a multiple of the dimension " + std::to_string(dim));
  if (normalization_.offset.size() != static_cast<std::size_t>(dim))
    throw std::invalid_argument("normalization map dimension does not match dataset");
  for (std::size_t i = 0; i < values_.size(); ++i) {
    const double x = values_[i];
    if (!(x >= 0.0 && x < 1.0))
      throw DomainError("point " + std::to_string(i / static_cast<std::size_t>(dim)) + " coordinate " +
                        std::to_string(i % static_cast<std::size_t>(dim)) + " = " + std::to_string(x) +
                        " outside [0,1)");
  }
}

double squared_distance(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) {
    const double d = a[k] - b[k];
    s += d * d;
  }
  return s;
}

}  // namespace recontree
