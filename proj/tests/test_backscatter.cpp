#include <cmath>

#include "doctest.h"
#include "quadscat/backscatter.hpp"
#include "quadscat/parallel.hpp"

using namespace quadscat;

namespace {

const SphereQuadrature& quad() {
  static const auto q = SphereQuadrature::product_gauss(14);
  return q;
}

}  // namespace

TEST_CASE("A vanishes at t = 0 and is symmetric") {
  GridSpec spec(32, 8.0);
  auto f = sample_gaussian(spec, {{0.4, 0, 0}, 0.7});
  auto g = sample_gaussian(spec, {{0, 0.3, 0}, 0.7});
  PipelineConfig cfg;
  cfg.K = 6;
  auto a = A_time_route(f, g, quad(), cfg);
  auto b = A_time_route(g, f, quad(), cfg);
  REQUIRE(a.size() == 7);
  CHECK(max_abs(a.slice(0)) == 0.0);
  for (std::size_t k = 0; k < a.size(); ++k) CHECK(max_abs_diff(a.slice(k), b.slice(k)) == 0.0);
}

TEST_CASE("B2 is symmetric and Q routes agree") {
  GridSpec spec(32, 8.0);
  auto f = sample_gaussian(spec, {{0.5, 0, 0}, 0.6});
  auto g = sample_gaussian(spec, {{-0.5, 0.2, 0}, 0.6});
  auto h = sample_gaussian(spec, {{0, 0, 0.3}, 1.0});
  Diagnostics diag;
  auto fg = B2(f, g, quad(), {}, &diag);
  auto gf = B2(g, f, quad(), {}, &diag);
  CHECK(max_abs_diff(fg, gf) == 0.0);
  const auto q = Q_form(f, g, h, quad());
  CHECK(q.rel_diff < 1e-10);
}

TEST_CASE("B2 does not depend on the thread count") {
  GridSpec spec(32, 8.0);
  auto f = sample_gaussian(spec, {{0.5, 0, 0}, 0.6});
  auto g = sample_gaussian(spec, {{0, 0.5, 0}, 0.6});
  const unsigned saved = max_threads();
  set_max_threads(1);
  auto one = B2(f, g, quad());
  set_max_threads(3);
  auto three = B2(f, g, quad());
  set_max_threads(saved);
  CHECK(max_abs_diff(one, three) == 0.0);
}

TEST_CASE("short time horizon warns") {
  GridSpec spec(32, 8.0);
  auto f = sample_gaussian(spec, {{0, 0, 0}, 0.6});
  PipelineConfig cfg;
  cfg.K = 2;
  Diagnostics diag;
  B2(f, f, quad(), cfg, &diag);
  CHECK_FALSE(diag.empty());
}

TEST_CASE("fourier check rejects points outside the band") {
  GridSpec spec(32, 8.0);
  auto f = sample_gaussian(spec, {{0, 0, 0}, 0.6});
  PipelineConfig cfg;
  cfg.K = 4;
  const double too_high = 2.0 * kPi / spec.spacing();
  CHECK_THROWS_AS(A_fourier_check(f, f, {{{0, 0, 0}, too_high}}, quad(), cfg), std::invalid_argument);
}

TEST_CASE("support and radiality diagnostics") {
  GridSpec spec(32, 8.0);
  auto u = sample_gaussian(spec, {{0, 0, 0}, 0.5});
  CHECK(nonradial_fraction(u) < 1e-6);
  CHECK(support_check(3.0, 3.0, u) < 1e-12);
  auto off = sample_gaussian(spec, {{2.0, 0, 0}, 0.5});
  CHECK(nonradial_fraction(off) > 0.1);
  CHECK(support_radius(u) == doctest::Approx(3.0).epsilon(0.05));
}
