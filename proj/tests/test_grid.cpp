#include <cmath>
#include <filesystem>
#include <random>

#include "doctest.h"
#include "quadscat/field_io.hpp"
#include "quadscat/grid.hpp"

using namespace quadscat;

namespace {

ScalarField noise(const GridSpec& spec, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> d;
  ScalarField f(spec, Space::Position);
  for (auto& v : f.values()) v = {d(rng), d(rng)};
  return f;
}

}  // namespace

TEST_CASE("grid spec rejects bad shapes") {
  CHECK_THROWS_AS(GridSpec(33, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(GridSpec(8, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(GridSpec(32, 0.0), std::invalid_argument);
  GridSpec g(32, 4.0);
  CHECK(g.spacing() == doctest::Approx(0.25));
  CHECK(g.coord(16) == 0.0);
  CHECK(g.freq(16) == 0.0);
}

TEST_CASE("gaussian transform matches closed form") {
  GridSpec spec(32, 8.0);
  const double w = 1.0;
  auto F = forward_transform(sample_gaussian(spec, {{0, 0, 0}, w}));
  const auto dual = spec.dual();
  double err = 0.0;
  for (std::size_t i = 0; i < F.size(); ++i) {
    const auto xi = dual.node(i);
    const double s2 = xi[0] * xi[0] + xi[1] * xi[1] + xi[2] * xi[2];
    if (s2 > 16.0) continue;  // images of the periodic sum reach 1e-9 near the band edge
    const double exact = std::pow(2.0 * kPi * w * w, 1.5) * std::exp(-0.5 * w * w * s2);
    err = std::max(err, std::abs(F[i] - exact));
  }
  CHECK(err < 1e-10);
}

TEST_CASE("transform round trip and Parseval") {
  GridSpec spec(16, 3.0);
  auto f = noise(spec, 7);
  auto F = forward_transform(f);
  CHECK(relative_l2_diff(inverse_transform(F), f) < 1e-12);
  const double lhs = std::pow(l2_norm(f), 2);
  const double rhs = std::pow(l2_norm(F), 2) / std::pow(2.0 * kPi, 3);
  CHECK(std::abs(lhs - rhs) / lhs < 1e-12);
}

TEST_CASE("translation by a grid step is a roll") {
  GridSpec spec(16, 4.0);
  auto f = noise(spec, 3);
  auto t = translate(f, {spec.spacing(), 0.0, 0.0});
  const std::size_t n = spec.points();
  double err = 0.0;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      for (std::size_t k = 0; k < n; ++k)
        err = std::max(err, std::abs(t.at((i + 1) % n, j, k) - f.at(i, j, k)));
  CHECK(err < 1e-12);
}

TEST_CASE("space and grid contracts") {
  GridSpec a(16, 4.0), b(16, 5.0);
  ScalarField f(a, Space::Position), g(b, Space::Position);
  CHECK_THROWS_AS(f += g, std::invalid_argument);
  CHECK_THROWS_AS(inverse_transform(f), ContractError);
  CHECK_THROWS_AS(forward_transform(forward_transform(f)), ContractError);
}

TEST_CASE("gaussian outside the box warns") {
  Diagnostics diag;
  sample_gaussian(GridSpec(16, 4.0), {{0, 0, 0}, 1.0}, &diag);
  CHECK_FALSE(diag.empty());
  Diagnostics quiet;
  sample_gaussian(GridSpec(32, 8.0), {{0, 0, 0}, 1.0}, &quiet);
  CHECK(quiet.empty());
}

TEST_CASE("field files round trip") {
  const auto dir = std::filesystem::temp_directory_path() / "quadscat_test_io";
  std::filesystem::create_directories(dir);
  GridSpec spec(16, 2.5);
  auto f = noise(spec, 11);
  write_field(f, dir / "f");
  auto g = read_field(dir / "f.json");
  CHECK(g.spec() == spec);
  CHECK(g.space() == Space::Position);
  CHECK(max_abs_diff(f, g) == 0.0);
  CHECK_THROWS_AS(read_field(dir / "missing"), std::runtime_error);
  std::filesystem::remove_all(dir);
}
