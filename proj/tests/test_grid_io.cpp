#include <doctest.h>

#include "zubov/errors.hpp"
#include "zubov/grid_io.hpp"
#include "zubov/rng.hpp"

#include <filesystem>
#include <fstream>

using namespace zubov;

namespace {

ValueGrid random_grid(int res0, int res1, std::uint64_t seed) {
  ValueGrid g;
  g.lower = {-1.5, -2.0};
  g.upper = {1.5, 2.0};
  g.resolution = {res0, res1};
  g.values.resize(static_cast<std::size_t>(res0) * res1);
  Xoshiro256PlusPlus rng(seed);
  for (double& v : g.values) v = rng.uniform01();
  return g;
}

int count_lines(const std::string& path) {
  std::ifstream is(path);
  REQUIRE(is);
  int n = 0;
  std::string line;
  while (std::getline(is, line)) ++n;
  return n;
}

struct TempFile {
  std::string path;
  explicit TempFile(std::string p) : path(std::move(p)) {}
  ~TempFile() { std::filesystem::remove(path); }
};

}  // namespace

TEST_CASE("grid export round-trips values exactly") {
  TempFile f("grid_roundtrip_test.csv");
  const ValueGrid g = random_grid(7, 5, 42);
  export_grid(g, f.path);
  const ValueGrid back = load_grid(f.path);
  CHECK(back.same_geometry(g));
  REQUIRE(back.values.size() == g.values.size());
  for (std::size_t i = 0; i < g.values.size(); ++i) {
    CHECK(back.values[i] == g.values[i]);
  }
}

TEST_CASE("row count is the node count plus one header") {
  TempFile f("grid_rowcount_test.csv");
  const ValueGrid g = random_grid(4, 6, 1);
  export_grid(g, f.path);
  CHECK(count_lines(f.path) == 4 * 6 + 1);
}

TEST_CASE("a 2x2 grid round-trips") {
  TempFile f("grid_2x2_test.csv");
  ValueGrid g;
  g.lower = {0.0, 0.0};
  g.upper = {1.0, 1.0};
  g.resolution = {2, 2};
  g.values = {0.125, 0.25, 0.5, 0.75};
  export_grid(g, f.path);
  const ValueGrid back = load_grid(f.path);
  CHECK(back.values == g.values);
}

TEST_CASE("slice metadata survives the round trip") {
  TempFile f("grid_slice_test.csv");
  ValueGrid g = random_grid(3, 3, 9);
  g.state_axes = {2, 4};
  g.pins = {{0, 0.0}, {1, 0.0}, {3, 0.25}, {5, -0.5}};
  export_grid(g, f.path);
  const ValueGrid back = load_grid(f.path);
  CHECK(back.state_axes == g.state_axes);
  CHECK(back.pins == g.pins);
}

TEST_CASE("diff statistics and the difference grid") {
  ValueGrid a = random_grid(6, 6, 2);
  ValueGrid b = a;
  b.values[7] += 0.25;
  b.values[11] -= 0.5;
  CHECK(sup_diff(a, b) == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(mean_abs_diff(a, b) == doctest::Approx(0.75 / 36.0).epsilon(1e-12));

  const ValueGrid d = diff_grid(a, b);
  CHECK(d.values[7] == doctest::Approx(-0.25).epsilon(1e-15));
  CHECK(d.values[0] == 0.0);

  ValueGrid other = random_grid(5, 6, 3);
  CHECK_THROWS_AS(sup_diff(a, other), ArgumentError);
}

TEST_CASE("loader rejects truncated and malformed files") {
  TempFile f("grid_bad_test.csv");
  {
    std::ofstream os(f.path);
    os << "# axis0 0 1 2, axis1 0 1 2, slice axes 0 1 pins -\n";
    os << "0,0,0.5\n";  // three rows missing
  }
  CHECK_THROWS_AS(load_grid(f.path), ParseError);
  {
    std::ofstream os(f.path);
    os << "not a grid\n";
  }
  CHECK_THROWS_AS(load_grid(f.path), ParseError);
  CHECK_THROWS_AS(load_grid("does_not_exist_grid.csv"), IoError);
}
