#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>
#include <unordered_set>

#include "json.hpp"
#include "recontree/errors.hpp"
#include "recontree/reconstruction.hpp"

namespace recontree {

namespace {

constexpr const char* kQuantizerFormat = "recontree-quantizer";
constexpr int kQuantizerVersion = 1;

void check_tiling(int dim, const std::vector<CellId>& leaves) {
  const TreeConfig cfg(dim, kHardMaxDepth);
  std::unordered_set<CellId, CellIdHash> set;
  double volume = 0.0;
  for (const auto& leaf : leaves) {
    validate_cell(cfg, leaf);
    set.insert(leaf);
    volume += cell_volume(leaf);
  }
  for (const auto& leaf : leaves)
    for (CellId c = leaf; !c.is_root();) {
      c = parent(c);
      if (set.contains(c)) throw FormatError("quantizer leaves overlap");
    }
  if (std::abs(volume - 1.0) > 1e-9) throw FormatError("quantizer leaves do not tile the unit cube");
}

}  // namespace

std::string quantizer_to_json(const Quantizer& q) {
  nlohmann::ordered_json j;
  j["format"] = kQuantizerFormat;
  j["version"] = kQuantizerVersion;
  j["dim"] = q.dim();
  // The single-cell quantizer has an infinite threshold, stored as null.
  j["eta"] = std::isfinite(q.eta()) ? nlohmann::ordered_json(q.eta()) : nlohmann::ordered_json(nullptr);
  j["gamma"] = q.schedule().gamma;
  j["beta"] = q.schedule().beta;
  j["depth_cap"] = q.depth_cap();
  auto& leaves = j["leaves"] = nlohmann::ordered_json::array();
  for (std::size_t i = 0; i < q.leaf_count(); ++i) {
    nlohmann::ordered_json leaf;
    leaf["depth"] = q.leaves()[i].depth;
    leaf["index"] = q.leaves()[i].index;
    leaf["code"] = q.codes()[i];
    leaves.push_back(std::move(leaf));
  }
  return j.dump(1) + "\n";
}

Quantizer quantizer_from_json(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
    if (j.at("format").get<std::string>() != kQuantizerFormat) throw FormatError("not a quantizer file");
    if (j.at("version").get<int>() != kQuantizerVersion)
      throw FormatError("unsupported quantizer version " + std::to_string(j.at("version").get<int>()));
    const int dim = j.at("dim").get<int>();
    const double eta =
        j.at("eta").is_null() ? std::numeric_limits<double>::infinity() : j.at("eta").get<double>();
    const auto schedule = RateSchedule::for_dim(dim, j.at("gamma").get<double>(), j.at("beta").get<double>());
    std::vector<CellId> leaves;
    std::vector<std::vector<double>> codes;
    for (const auto& leaf : j.at("leaves")) {
      leaves.push_back(CellId{leaf.at("depth").get<int>(), leaf.at("index").get<std::vector<std::uint64_t>>()});
      codes.push_back(leaf.at("code").get<std::vector<double>>());
    }
    check_tiling(dim, leaves);
    return Quantizer(dim, std::move(leaves), std::move(codes), eta, j.at("depth_cap").get<int>(), schedule);
  } catch (const nlohmann::json::exception& e) {
    throw FormatError(std::string("malformed quantizer: ") + e.what());
  }
}

void save_quantizer(const Quantizer& q, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open " + path + " for writing");
  out << quantizer_to_json(q);
  if (!out) throw std::runtime_error("failed writing " + path);
}

Quantizer load_quantizer(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return quantizer_from_json(ss.str());
}

}  // namespace recontree
