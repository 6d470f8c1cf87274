#pragma once

// Binary dataset files:
//   bytes 0-7   magic "RCTDATA\0"
//   u32         version (1)
//   u32         dimension D
//   u64         point count n
//   f64         normalization scale
//   f64 x D     normalization offset
//   f64 x n*D   coordinates, row-major
// All integers and floats little-endian.

#include <string>
#include <vector>

#include "recontree/dataset.hpp"

namespace recontree {

struct RawPoints {
  int dim = 0;
  std::vector<double> values;
  std::size_t size() const { return dim == 0 ? 0 : values.size() / static_cast<std::size_t>(dim); }
};

void write_dataset(const Dataset& data, const std::string& path);
Dataset read_dataset(const std::string& path);

/// Numeric CSV; an optional non-numeric first row is treated as a header.
/// Blank lines and lines starting with '#' are skipped.
RawPoints read_csv(const std::string& path);

/// Binary file if it carries the magic, otherwise CSV passed through normalize().
Dataset load_points(const std::string& path);

bool is_dataset_file(const std::string& path);

}  // namespace recontree
