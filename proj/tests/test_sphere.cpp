#include <cmath>
#include <filesystem>

#include "doctest.h"
#include "quadscat/sphere.hpp"

using namespace quadscat;

namespace {

// \int_{S^2} x^a y^b z^c dw for even exponents, via Gamma functions.
double monomial_integral(int a, int b, int c) {
  if (a % 2 || b % 2 || c % 2) return 0.0;
  const double ga = std::tgamma(0.5 * (a + 1)), gb = std::tgamma(0.5 * (b + 1)), gc = std::tgamma(0.5 * (c + 1));
  return 2.0 * ga * gb * gc / std::tgamma(0.5 * (a + b + c + 3));
}

}  // namespace

TEST_CASE("product rule integrates monomials exactly to its degree") {
  const auto q = SphereQuadrature::product_gauss(14);
  CHECK(q.size() == 128);
  double worst = 0.0;
  for (int a = 0; a <= 14; ++a)
    for (int b = 0; a + b <= 14; ++b)
      for (int c = 0; a + b + c <= 14; ++c) {
        double s = 0.0;
        for (std::size_t i = 0; i < q.size(); ++i) {
          const auto& w = q.nodes()[i];
          s += q.weights()[i] * std::pow(w[0], a) * std::pow(w[1], b) * std::pow(w[2], c);
        }
        worst = std::max(worst, std::abs(s - monomial_integral(a, b, c)));
      }
  CHECK(worst < 1e-13);
  for (std::size_t i = 0; i < q.pairs(); ++i) {
    const auto& u = q.nodes()[i];
    const auto& v = q.nodes()[i + q.pairs()];
    CHECK(u[0] == -v[0]);
    CHECK(u[1] == -v[1]);
    CHECK(u[2] == -v[2]);
  }
}

TEST_CASE("node validation") {
  const double w = 2.0 * kPi;
  CHECK_THROWS_AS(SphereQuadrature::from_nodes({{0, 0, 1}, {0, 0, -1}}, {w, 2 * w}, 1), std::invalid_argument);
  CHECK_THROWS_AS(SphereQuadrature::from_nodes({{0, 0, 1}, {0, 1, 0}}, {w, w}, 1), std::invalid_argument);
  CHECK_THROWS_AS(SphereQuadrature::from_nodes({{0, 0, 2}, {0, 0, -2}}, {w, w}, 1), std::invalid_argument);
  CHECK_NOTHROW(SphereQuadrature::from_nodes({{0, 0, 1}, {0, 0, -1}}, {w, w}, 1));
}

TEST_CASE("node files round trip and the shipped file is the default rule") {
  const auto path = std::filesystem::temp_directory_path() / "quadscat_sphere.txt";
  const auto q = SphereQuadrature::product_gauss(14);
  q.write(path);
  const auto r = SphereQuadrature::from_file(path, 14);
  REQUIRE(r.size() == q.size());
  double diff = 0.0;
  for (std::size_t i = 0; i < q.size(); ++i) {
    diff = std::max(diff, std::abs(q.weights()[i] - r.weights()[i]));
    for (int d = 0; d < 3; ++d) diff = std::max(diff, std::abs(q.nodes()[i][d] - r.nodes()[i][d]));
  }
  CHECK(diff < 1e-15);
  std::filesystem::remove(path);

  const auto shipped = SphereQuadrature::from_file(std::filesystem::path(QUADSCAT_DATA_DIR) / "sphere_default.txt", 14);
  CHECK(shipped.size() == q.size());
}

TEST_CASE("trilinear sampling converges at second order") {
  auto err_at = [](std::size_t n) {
    GridSpec spec(n, 6.0);
    auto g = sample_gaussian(spec, {{0, 0, 0}, 1.0});
    std::vector<Vec3> pts{{0.31, -0.17, 0.53}, {1.11, 0.4, -0.77}, {-0.9, 0.05, 0.2}};
    auto v = sample_offgrid(g, pts, Interpolation::Trilinear);
    double e = 0.0;
    for (std::size_t i = 0; i < pts.size(); ++i) {
      const auto& p = pts[i];
      e = std::max(e, std::abs(v[i] - std::exp(-0.5 * (p[0] * p[0] + p[1] * p[1] + p[2] * p[2]))));
    }
    return e;
  };
  const double order = std::log2(err_at(32) / err_at(64));
  CHECK(order == doctest::Approx(2.0).epsilon(0.25));
  GridSpec spec(32, 6.0);
  auto g = sample_gaussian(spec, {{0, 0, 0}, 1.0});
  CHECK(std::abs(sample_offgrid(g, {spec.node(1234)}, Interpolation::Trilinear)[0] - g[1234]) < 1e-15);
}

TEST_CASE("spherical mean properties") {
  GridSpec spec(32, 8.0);
  const auto q = SphereQuadrature::product_gauss(14);
  auto f = sample_gaussian(spec, {{0.5, 0, 0}, 0.8});
  auto g = sample_gaussian(spec, {{0, -0.3, 0.2}, 1.0});
  auto fg = bilinear_spherical_S(f, g, 1.0, q);
  auto gf = bilinear_spherical_S(g, f, 1.0, q);
  CHECK(max_abs_diff(fg, gf) == 0.0);
  CHECK(max_abs(bilinear_spherical_S(f, g, 0.0, q)) == 0.0);
  // S(f, g)(x, t) for f = g = e^{-|x|^2} at x = 0 is t 4 pi e^{-2 t^2}
  auto h = sample_gaussian(GridSpec(64, 8.0), {{0, 0, 0}, std::sqrt(0.5)});
  const double t = 0.7;
  const cplx v = bilinear_spherical_S_at(h, h, {0, 0, 0}, t, q);
  CHECK(std::abs(v - t * 4.0 * kPi * std::exp(-2.0 * t * t)) < 1e-8);
}

TEST_CASE("cap measure scales like the area of a small cap") {
  const auto a = cap_measure_mc({1, 0, 0}, 1.0, 1.0, 0.2, 100000, 1);
  const auto b = cap_measure_mc({1, 0, 0}, 1.0, 1.0, 0.4, 100000, 1);
  CHECK(a.measure > 0.0);
  CHECK(b.measure >= a.measure);
  CHECK(std::log(b.measure / a.measure) / std::log(2.0) == doctest::Approx(2.0).epsilon(0.2));
}
