#include <cmath>

#include "doctest.h"
#include "quadscat/spectral.hpp"

using namespace quadscat;

TEST_CASE("bessel multiplier on a gaussian") {
  // ||<D>^b g||^2 = (2 pi)^-3 \int (1+|xi|^2)^b |g^|^2 computed on a radial quadrature.
  GridSpec spec(32, 8.0);
  auto g = sample_gaussian(spec, {{0, 0, 0}, 1.0});
  const double b = 1.0;
  // g^ = (2 pi)^{3/2} e^{-|xi|^2/2}; (1+r^2) e^{-r^2} 4 pi r^2 dr integrates to pi^{3/2} (1 + 3/2).
  const double exact = std::sqrt(std::pow(2.0 * kPi, 3) * std::pow(kPi, 1.5) * 2.5 / std::pow(2.0 * kPi, 3));
  CHECK(sobolev_norm(g, {0.0, b}) == doctest::Approx(exact).epsilon(1e-10));
  CHECK(l2_norm(bessel_multiplier(bessel_multiplier(g, 0.7), -0.7)) == doctest::Approx(l2_norm(g)).epsilon(1e-12));
}

TEST_CASE("weights and orders") {
  GridSpec spec(32, 8.0);
  auto g = sample_gaussian(spec, {{1, 0, 0}, 1.0});
  const double n00 = sobolev_norm(g, {0, 0});
  CHECK(n00 == doctest::Approx(l2_norm(g)));
  CHECK(sobolev_norm(g, {1, 0}) > n00);
  CHECK(sobolev_norm(g, {0, 1}) > n00);
  CHECK(sobolev_norm(g, {-1, 0}) < n00);
  const double out = sobolev_norm(g, {1, 1}, OperatorOrder::WeightOutside);
  const double in = sobolev_norm(g, {1, 1}, OperatorOrder::WeightInside);
  CHECK(out / in == doctest::Approx(1.0).epsilon(0.5));
}

TEST_CASE("propagators satisfy the wave equation") {
  GridSpec spec(32, 8.0);
  auto g = sample_gaussian(spec, {{0, 0, 0}, 0.8});
  const double t = 0.6, dt = 1e-3;
  auto d2 = cosine_propagator(g, t + dt) + cosine_propagator(g, t - dt) - cplx(2.0) * cosine_propagator(g, t);
  d2 *= 1.0 / (dt * dt);
  CHECK(relative_l2_diff(d2, laplacian(cosine_propagator(g, t))) < 1e-5);
  CHECK(relative_l2_diff(cosine_propagator(g, 0.0), g) < 1e-14);
  // energy split on the symbols: cos^2 + sin^2 = 1
  auto c = cosine_symbol(spec, 1.3), s = sine_symbol(spec, 1.3);
  double worst = 0.0;
  for (std::size_t i = 0; i < c.size(); ++i) worst = std::max(worst, std::abs(c[i] * c[i] + s[i] * s[i] - 1.0));
  CHECK(worst < 1e-12);
}

TEST_CASE("finite propagation speed") {
  GridSpec spec(64, 8.0);
  auto g = sample_gaussian(spec, {{0, 0, 0}, 0.5});
  const double t = 3.0;
  const double frac = energy_fraction_outside(sine_propagator(g, t), {0, 0, 0}, t + 6 * 0.5);
  CHECK(frac < 1e-8);
}

TEST_CASE("commutator probe is deterministic and grows with b") {
  CommutatorProbeOptions opt;
  opt.trials = 2;
  opt.iterations = 8;
  opt.grid_points = 16;
  opt.half_width = 6.0;
  auto a = commutator_growth_probe(1.0, 2.0, opt);
  auto b = commutator_growth_probe(1.0, 2.0, opt);
  CHECK(a.estimate == b.estimate);
  CHECK(a.estimate >= 1.0 - 1e-9);
  CHECK(commutator_growth_probe(0.0, 2.0, opt).estimate == doctest::Approx(1.0).epsilon(1e-9));
}
