#include <stdexcept>
#include <filesystem>
#include <fstream>
#include <unistd.h>

#include "doctest.h"
#include "recontree/data_gen.hpp"
#include "recontree/dataset_io.hpp"
#include "recontree/errors.hpp"
#include "recontree/reconstruction.hpp"

using namespace recontree;
namespace fs = std::filesystem;

namespace {

struct TempDir {
  fs::path path;
  TempDir() : path(fs::temp_directory_path() / fs::path("recontree_io_" + std::to_string(::getpid()))) {
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
  std::string file(const std::string& name) const { return (path / name).string(); }
};

}  // namespace

TEST_CASE("binary dataset round trip keeps the normalization map") {
  TempDir dir;
  GeneratorSpec s;
  s.kind = GeneratorKind::sphere;
  s.ambient_dim = 3;
  const auto data = sample(s, 200);
  write_dataset(data, dir.file("d.bin"));
  CHECK(is_dataset_file(dir.file("d.bin")));
  const auto back = read_dataset(dir.file("d.bin"));
  CHECK(back.values() == data.values());
  CHECK(back.normalization() == data.normalization());
  CHECK(load_points(dir.file("d.bin")).values() == data.values());
}

TEST_CASE("csv input is normalized into the cube") {
  TempDir dir;
  {
    std::ofstream out(dir.file("p.csv"));
    out << "x,y\n# comment\n0,0\n\n3,4\n1.5,2\n";
  }
  CHECK_FALSE(is_dataset_file(dir.file("p.csv")));
  const auto raw = read_csv(dir.file("p.csv"));
  CHECK(raw.dim == 2);
  CHECK(raw.size() == 3);
  const auto data = load_points(dir.file("p.csv"));
  CHECK(data.normalization().scale == doctest::Approx(0.2));
  CHECK(data.point(2)[0] == doctest::Approx(0.3));
}

TEST_CASE("bad files") {
  TempDir dir;
  {
    std::ofstream out(dir.file("ragged.csv"));
    out << "1,2\n3\n";
  }
  CHECK_THROWS_AS(read_csv(dir.file("ragged.csv")), FormatError);
  {
    std::ofstream out(dir.file("text.csv"));
    out << "a,b\nc,d\n";
  }
  CHECK_THROWS_AS(read_csv(dir.file("text.csv")), FormatError);
  {
    std::ofstream out(dir.file("short.bin"), std::ios::binary);
    out.write("RCTDATA\0\1\0", 10);
  }
  CHECK_THROWS_AS(read_dataset(dir.file("short.bin")), FormatError);
  CHECK_THROWS(read_dataset(dir.file("missing.bin")));
}

TEST_CASE("quantizer files") {
  TempDir dir;
  GeneratorSpec s;
  s.ambient_dim = 2;
  const auto q = fit(sample(s, 500), 0.05, RateSchedule::for_dim(2));
  save_quantizer(q, dir.file("q.json"));
  const auto back = load_quantizer(dir.file("q.json"));
  CHECK(back.leaves() == q.leaves());
  CHECK(back.codes() == q.codes());
}
