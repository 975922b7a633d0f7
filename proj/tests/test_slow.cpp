#include <cmath>

#include "doctest.h"
#include "quadscat/backscatter.hpp"

using namespace quadscat;

namespace {

// Relative l2 distance between the transforms of a coarse and a fine field on
// the coarse frequency lattice (both share L, so the lattices nest).
double low_band_diff(const ScalarField& coarse, const ScalarField& fine) {
  const auto C = forward_transform(coarse);
  const auto F = forward_transform(fine);
  const std::size_t n = coarse.spec().points(), off = (fine.spec().points() - n) / 2;
  double num = 0.0, den = 0.0;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      for (std::size_t k = 0; k < n; ++k) {
        const cplx ref = F.at(i + off, j + off, k + off);
        num += std::norm(C.at(i, j, k) - ref);
        den += std::norm(ref);
      }
  return std::sqrt(num / den);
}

ScalarField b2_on(std::size_t n, double L, const SphereQuadrature& quad) {
  const GridSpec spec(n, L);
  const auto f = sample_gaussian(spec, {{0.5, 0.0, 0.0}, 1.0});
  const auto g = sample_gaussian(spec, {{0.0, -0.5, 0.25}, 1.0});
  return B2(f, g, quad);
}

}  // namespace

TEST_CASE("B2 converges under grid refinement") {
  const auto quad = SphereQuadrature::product_gauss(14);
  const double L = 12.0;
  const auto ref = b2_on(96, L, quad);
  double previous = 1.0;
  for (std::size_t n : {32, 48, 64}) {
    const double d = low_band_diff(b2_on(n, L, quad), ref);
    MESSAGE("N=" << n << " relative difference to N=96: " << d);
    CHECK(d < previous);
    previous = d;
  }
  CHECK(previous < 1e-2);
}

TEST_CASE("A slices vanish once the spheres leave both supports") {
  // Width 1 Gaussians (support radius 6) on a box whose wrap horizon exceeds r_f + r_g.
  const GridSpec spec(96, 20.0);
  const auto quad = SphereQuadrature::product_gauss(14);
  const auto f = sample_gaussian(spec, {{0.0, 0.0, 0.0}, 1.0});
  const auto g = sample_gaussian(spec, {{0.5, 0.0, 0.0}, 1.0});
  Diagnostics diag;
  const double peak = max_abs(bilinear_spherical_S(f, g, 0.7, quad, {}, &diag));
  for (double t : {12.5, 12.9}) {
    const double tail = max_abs(bilinear_spherical_S(f, g, t, quad, {}, &diag));
    CHECK(tail <= 1e-8 * peak);
  }
  CHECK(diag.empty());
}
