#include <cmath>

#include "doctest.h"
#include "quadscat/kernels.hpp"

using namespace quadscat;

TEST_CASE("p polynomial coefficients") {
  CHECK(p_polynomial(3).degree() == -1);
  CHECK(p_polynomial(3).to_string() == "0");
  const auto p5 = p_polynomial(5);
  REQUIRE(p5.coeffs.size() == 1);
  CHECK(p5.coeffs[0] == Rational(-1, 8));
  const auto p7 = p_polynomial(7);
  REQUIRE(p7.coeffs.size() == 2);
  CHECK(p7.coeffs[0] == Rational(0));
  CHECK(p7.coeffs[1] == Rational(-3, 16));
  const auto p9 = p_polynomial(9);
  REQUIRE(p9.coeffs.size() == 3);
  CHECK(p9.coeffs[0] == Rational(3, 64));
  CHECK(p9.coeffs[1] == Rational(0));
  CHECK(p9.coeffs[2] == Rational(-15, 64));
  CHECK(p7(0.5) == doctest::Approx(-3.0 * 0.5 / (16.0 * std::pow(kPi, 3))));
  CHECK_THROWS_AS(p_polynomial(4), std::invalid_argument);
  CHECK_THROWS_AS(p_polynomial(1), std::invalid_argument);
}

TEST_CASE("kappa0 main coefficient") {
  CHECK(kappa0_main_coefficient(3) == doctest::Approx(1.0 / (4.0 * kPi)));
  CHECK(kappa0_main_coefficient(5) == doctest::Approx(1.0 / (8.0 * kPi * kPi)));
}

TEST_CASE("hardy transform of the unit step") {
  const double dt = 0.002;
  std::vector<double> h(static_cast<std::size_t>(40.0 / dt) + 1, 0.0);
  for (std::size_t k = 0; k * dt <= 1.0 + 1e-12; ++k) h[k] = 1.0;
  const auto r = hardy_transform(h, dt);
  // H = -log t on (0, 1): \int H^2 = 2 against \int h^2 = 1
  CHECK(r.integral_H2 == doctest::Approx(2.0).epsilon(2e-3));
  CHECK(r.ratio <= 4.0);
  CHECK(r.H[250] == doctest::Approx(-std::log(0.5)).epsilon(1e-3));
}

TEST_CASE("E pairing routes agree on gaussian profiles") {
  const double dt = 0.002;
  auto phi = RadialProfile::sample([](double t) { return cplx(4 * kPi * std::exp(-t * t)); }, dt, 5001);
  auto psi = RadialProfile::sample([](double t) { return cplx(4 * kPi * t * t * std::exp(-2 * t * t)); }, dt, 5001);
  const auto a = E_pairing_direct(phi, psi);
  const auto b = E_pairing_4AM(phi, psi);
  CHECK(std::abs(a.value - b.value) <= 1e-3 * std::abs(a.value));
  const auto ab = E_pairing_direct(phi, psi).value + E_pairing_direct(psi, phi).value;
  CHECK(std::abs(ab) <= 1e-6 * a.scale);
  CHECK(std::abs(E_pairing_direct(phi, phi).value) <= 1e-6 * a.scale);
}

TEST_CASE("radial profile interpolation") {
  RadialProfile p(0.5, {cplx(0), cplx(1), cplx(4)});
  CHECK(p.at(0.75).real() == doctest::Approx(2.5));
  CHECK_THROWS_AS(p.at(1.5), std::out_of_range);
}
