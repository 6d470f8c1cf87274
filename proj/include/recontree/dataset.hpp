#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace recontree {

/// Similarity map y = (x - offset) * scale from raw coordinates into the unit cube.
struct AffineMap {
  double scale = 1.0;
  std::vector<double> offset;

  static AffineMap identity(int dim) { return AffineMap{1.0, std::vector<double>(static_cast<std::size_t>(dim), 0.0)}; }

  std::vector<double> apply(std::span<const double> x) const;
  std::vector<double> invert(std::span<const double> y) const;

  friend bool operator==(const AffineMap&, const AffineMap&) = default;
};

/// n points in [0,1)^D stored row-major.
class Dataset {
 public:
  /// Throws DomainError naming the first offending point if any coordinate
  /// is outside [0,1) or not finite.
  Dataset(int dim, std::vector<double> values);
  Dataset(int dim, std::vector<double> values, AffineMap normalization);

  int dim() const { return dim_; }
  std::size_t size() const { return values_.size() / static_cast<std::size_t>(dim_); }
  bool empty() const { return values_.empty(); }

  std::span<const double> point(std::size_t i) const {
    return {values_.data() + i * static_cast<std::size_t>(dim_), static_cast<std::size_t>(dim_)};
  }
  const std::vector<double>& values() const { return values_; }
  const AffineMap& normalization() const { return normalization_; }

 private:
  int dim_;
  std::vector<double> values_;
  AffineMap normalization_;
};

double squared_distance(std::span<const double> a, std::span<const double> b);

}  // namespace recontree
