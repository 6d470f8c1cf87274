#pragma once

// Synthetic samplers: uniform and bounded-density cubes, and uniform
// surface measure on low-dimensional manifolds embedded in R^D.

#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "recontree/dataset.hpp"

namespace recontree {

enum class GeneratorKind { uniform_cube, density_cube, circle, sphere, swiss_roll };

GeneratorKind parse_generator_kind(std::string_view name);
std::string_view to_string(GeneratorKind kind);

struct GeneratorSpec {
  GeneratorKind kind = GeneratorKind::uniform_cube;
  int ambient_dim = 1;
  std::uint64_t seed = 0;
  /// density_cube: the density is proportional to p1 + (p2 - p1) * mean(x),
  /// so p1/p2 bounds its ratio.
  double p1 = 1.0;
  double p2 = 1.0;
  /// Reserved; must be 0.
  double noise = 0.0;
  /// Seed of the fixed rotation embedding manifolds into R^D. Independent of
  /// `seed` so that train and holdout samples share one distribution.
  std::uint64_t embedding_seed = 0x5eed;

  int intrinsic_dim() const;
  /// Throws std::invalid_argument for unsupported (kind, dims) or bounds.
  void validate() const;
};

/// n points in [0,1)^D, deterministic given spec.seed. Manifold samples carry
/// the map from rotated ambient coordinates into the cube.
Dataset sample(const GeneratorSpec& spec, std::size_t n);

/// Row-major D x D rotation used to embed manifolds: ambient = R * (x, 0...).
std::vector<double> embedding_rotation(const GeneratorSpec& spec);

/// Single scale plus translation taking the bounding box of `values` into
/// [0, 1 - ulp]^D with diameter <= 1. A zero-diameter input maps to the cube center.
Dataset normalize(int dim, const std::vector<double>& values);

}  // namespace recontree
