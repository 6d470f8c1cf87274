#include "recontree/dataset_io.hpp"

#include <array>
#include <bit>
#include <charconv>
#include <cstring>
#include <fstream>
#include <sstream>

#include "recontree/data_gen.hpp"
#include "recontree/errors.hpp"

namespace recontree {

namespace {

constexpr std::array<char, 8> kMagic = {'R', 'C', 'T', 'D', 'A', 'T', 'A', '\0'};
constexpr std::uint32_t kVersion = 1;

template <typename T>
void put(std::ostream& out, T value) {
  static_assert(sizeof(T) == 4 || sizeof(T) == 8);
  using U = std::conditional_t<sizeof(T) == 4, std::uint32_t, std::uint64_t>;
  U bits = std::bit_cast<U>(value);
  std::array<char, sizeof(T)> bytes{};
  for (std::size_t b = 0; b < sizeof(T); ++b) bytes[b] = static_cast<char>((bits >> (8 * b)) & 0xff);
  out.write(bytes.data(), bytes.size());
}

template <typename T>
T get(std::istream& in) {
  using U = std::conditional_t<sizeof(T) == 4, std::uint32_t, std::uint64_t>;
  std::array<unsigned char, sizeof(T)> bytes{};
  in.read(reinterpret_cast<char*>(bytes.data()), bytes.size());
  if (!in) throw FormatError("truncated dataset file");
  U bits = 0;
  for (std::size_t b = 0; b < sizeof(T); ++b) bits |= static_cast<U>(bytes[b]) << (8 * b);
  return std::bit_cast<T>(bits);
}

bool parse_row(const std::string& line, std::vector<double>& row) {
  row.clear();
  const char* p = line.data();
  const char* end = p + line.size();
  while (p < end) {
    while (p < end && (*p == ' ' || *p == '\t')) ++p;
    double v = 0.0;
    auto [next, ec] = std::from_chars(p, end, v);
    if (ec != std::errc()) return false;
    row.push_back(v);
    p = next;
    while (p < end && (*p == ' ' || *p == '\t' || *p == '\r')) ++p;
    if (p < end) {
      if (*p != ',') return false;
      ++p;
    }
  }
  return !row.empty();
}

}  // namespace

void write_dataset(const Dataset& data, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open " + path + " for writing");
  out.write(kMagic.data(), kMagic.size());
  put<std::uint32_t>(out, kVersion);
  put<std::uint32_t>(out, static_cast<std::uint32_t>(data.dim()));
  put<std::uint64_t>(out, data.size());
  put<double>(out, data.normalization().scale);
  for (double v : data.normalization().offset) put<double>(out, v);
  for (double v : data.values()) put<double>(out, v);
  if (!out) throw std::runtime_error("failed writing " + path);
}

bool is_dataset_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::array<char, 8> head{};
  in.read(head.data(), head.size());
  return in && head == kMagic;
}

Dataset read_dataset(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::array<char, 8> head{};
  in.read(head.data(), head.size());
  if (!in || head != kMagic) throw FormatError(path + " is not a dataset file");
  const auto version = get<std::uint32_t>(in);
  if (version != kVersion) throw FormatError("unsupported dataset version " + std::to_string(version));
  const auto dim = get<std::uint32_t>(in);
  const auto n = get<std::uint64_t>(in);
  if (dim == 0 || dim > 20) throw FormatError("invalid dataset dimension " + std::to_string(dim));
  AffineMap map;
  map.scale = get<double>(in);
  for (std::uint32_t k = 0; k < dim; ++k) map.offset.push_back(get<double>(in));
  std::vector<double> values(n * dim);
  for (auto& v : values) v = get<double>(in);
  return Dataset(static_cast<int>(dim), std::move(values), std::move(map));
}

RawPoints read_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  RawPoints raw;
  std::string line;
  std::vector<double> row;
  std::size_t line_no = 0;
  bool first_content = true;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty() || line == "\r" || line[0] == '#') continue;
    if (!parse_row(line, row)) {
      if (first_content) {
        first_content = false;
        continue;
      }
      throw FormatError(path + ":" + std::to_string(line_no) + ": not a numeric row");
    }
    first_content = false;
    if (raw.dim == 0) raw.dim = static_cast<int>(row.size());
    if (static_cast<int>(row.size()) != raw.dim)
      throw FormatError(path + ":" + std::to_string(line_no) + ": expected " + std::to_string(raw.dim) + " columns");
    raw.values.insert(raw.values.end(), row.begin(), row.end());
  }
  if (raw.values.empty()) throw FormatError(path + " contains no data rows");
  return raw;
}

Dataset load_points(const std::string& path) {
  if (is_dataset_file(path)) return read_dataset(path);
  const auto raw = read_csv(path);
  return normalize(raw.dim, raw.values);
}

}  // namespace recontree
