#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <unistd.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <random>

#include "picode/codefile.hpp"
#include "picode/families.hpp"
#include "picode/kl.hpp"
#include "test_util.hpp"

using namespace pic;

namespace {

struct TempDir {
  std::filesystem::path path;
  TempDir() {
    path = std::filesystem::temp_directory_path() /
           ("picode_test_" + std::to_string(::getpid()));
    std::filesystem::create_directories(path);
  }
  ~TempDir() { std::filesystem::remove_all(path); }
  std::string file(const std::string& name) const {
    return (path / name).string();
  }
};

}  // namespace

TEST_CASE("code file round trip is lossless") {
  TempDir dir;
  std::mt19937_64 rng(79);
  CodewordTable table = testutil::random_table({6, 3, 2, 1}, rng);
  io::CodeMetadata meta;
  meta.seed = 1234;
  meta.cost = kl::cost(table);
  meta.generator = "test";
  io::write_code_file(dir.file("code.json"), table, meta);

  io::CodeFile loaded = io::read_code_file(dir.file("code.json"));
  CHECK(loaded.table.params().n == 6);
  CHECK(loaded.table.params().q_p == 3);
  CHECK(loaded.table.params().q_l == 2);
  CHECK(loaded.table.params().t == 1);
  for (int i = 0; i < 2; ++i)
    for (int c = 0; c < table.dim(); ++c)
      CHECK(loaded.table.row(i)[c] == table.row(i)[c]);
  REQUIRE(loaded.meta.seed.has_value());
  CHECK(*loaded.meta.seed == 1234);
  REQUIRE(loaded.meta.cost.has_value());
  // The recorded cost must be reproducible from the re-read table.
  CHECK(std::abs(kl::cost(loaded.table) - *loaded.meta.cost) < 1e-14);
}

TEST_CASE("analytic code survives a round trip") {
  TempDir dir;
  CodewordTable code = fam::analytic_7qubit();
  io::write_code_file(dir.file("analytic.json"), code);
  io::CodeFile loaded = io::read_code_file(dir.file("analytic.json"));
  CHECK(kl::cost(loaded.table) < 1e-24);
}

TEST_CASE("malformed files are rejected") {
  TempDir dir;
  CHECK_THROWS_AS(io::read_code_file(dir.file("missing.json")),
                  std::runtime_error);

  std::ofstream(dir.file("trunc.json")) << "{\"version\": 1, \"par";
  CHECK_THROWS_AS(io::read_code_file(dir.file("trunc.json")),
                  std::runtime_error);

  CodewordTable code = fam::analytic_7qubit();
  io::write_code_file(dir.file("bad.json"), code);
  {
    std::ifstream in(dir.file("bad.json"));
    std::string text((std::istreambuf_iterator<char>(in)),
                     std::istreambuf_iterator<char>());
    auto pos = text.find("\"version\": 1");
    REQUIRE(pos != std::string::npos);
    text.replace(pos, 12, "\"version\": 9");
    std::ofstream(dir.file("bad.json")) << text;
  }
  CHECK_THROWS_AS(io::read_code_file(dir.file("bad.json")),
                  std::runtime_error);
}

TEST_CASE("manifest and atomic writes") {
  TempDir dir;
  io::write_manifest(dir.file("manifest.json"), "picode test", 7, 0.25,
                     {"a.json"});
  std::ifstream in(dir.file("manifest.json"));
  REQUIRE(in.good());
  std::string text((std::istreambuf_iterator<char>(in)),
                   std::istreambuf_iterator<char>());
  CHECK(text.find("picode test") != std::string::npos);

  io::write_text_atomic(dir.file("atomic.txt"), "hello\n");
  std::ifstream check(dir.file("atomic.txt"));
  std::string line;
  std::getline(check, line);
  CHECK(line == "hello");
}
