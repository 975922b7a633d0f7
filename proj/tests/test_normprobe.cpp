#include <cmath>
#include <sstream>

#include "doctest.h"
#include "quadscat/dyadic.hpp"
#include "quadscat/normprobe.hpp"
#include "quadscat/spectral.hpp"

using namespace quadscat;

TEST_CASE("exponent tuples parse or throw") {
  const auto s = parse_exponent_tuple("1,0,1,0,1.5,-0.25");
  CHECK(s.a1 == 1.0);
  CHECK(s.a == 1.5);
  CHECK(s.b == -0.25);
  CHECK_THROWS_AS(parse_exponent_tuple("1,0,1,0,1"), std::invalid_argument);
  CHECK_THROWS_AS(parse_exponent_tuple("1,0,1,0,1,x"), std::invalid_argument);
  CHECK_THROWS_AS(parse_exponent_tuple(""), std::invalid_argument);
}

TEST_CASE("main region") {
  CHECK(region_mainthm({1, 1, 1, 1, 1, 0.5}, 0));
  CHECK_FALSE(region_mainthm({1, 1, 2, 1, 1.5, 0}, 0));  // a + b bound is sharp at 1.5
  CHECK_FALSE(region_mainthm({1, 1, 1, 1, 0, 0.5}, 0));  // a must be positive
  CHECK_FALSE(region_mainthm({1, 1, 1, 1, 1.5, 0}, 0));  // a <= a' + a'' - 1/2 fails
  CHECK_FALSE(region_mainthm({1, 0.2, 1, 0.2, 1, 0.5}, 0));  // b + m <= b' + b''
  // enlarging the input exponents never leaves the region
  const ExponentTuple base{1, 1, 1, 1, 1, 0.5};
  for (double d : {0.1, 0.5, 1.0}) CHECK(region_mainthm({base.a1 + d, base.b1 + d, base.a2 + d, base.b2 + d, 1, 0.5}, 0));
}

TEST_CASE("A and S regions") {
  CHECK(region_A({0.5, 0, 0.5, 0, 0.5, 0}, 0));
  CHECK_FALSE(region_A({0, 0, 0, 0, 0.4, 0.4}, 0));
  CHECK(region_S(1, -0.5, 0.4, 0));
  CHECK_FALSE(region_S(0, 0, 1, 0));
  CHECK_FALSE(region_S(0, 0, 0.5, 0));
  CHECK(region_S(0.5, 0.5, 1.0, 1));
}

TEST_CASE("sigma lattice") {
  const auto lat = sigma_lattice({1, 1, 1, 1, 1, 0.5}, 0.25, 0.5);
  REQUIRE(lat.size() == 9);
  CHECK(lat.front().a == 0.75);
  CHECK(lat.front().b == 0.0);
  CHECK(lat.back().a == 1.25);
  CHECK(lat.back().b == 1.0);
}

TEST_CASE("line fit") {
  const auto fit = fit_line({0, 1, 2, 3}, {1, 3, 5, 7});
  CHECK(fit.slope == doctest::Approx(2.0));
  CHECK(fit.intercept == doctest::Approx(1.0));
  CHECK(fit.slope_stderr == doctest::Approx(0.0));
  CHECK_THROWS(fit_line({1}, {1}));
}

TEST_CASE("witness norms scale as predicted") {
  // ||<x>^a g(. - v)|| grows like |v|^a for large |v|
  GridSpec spec(64, 24.0);
  std::vector<double> x, y;
  for (double v : {8.0, 12.0, 16.0}) {
    auto g = sample_gaussian(spec, {{v, 0, 0}, 1.0});
    x.push_back(std::log(v));
    y.push_back(std::log(sobolev_norm(g, {1.0, 0.0})));
  }
  CHECK(fit_line(x, y).slope == doctest::Approx(1.0).epsilon(0.05));
  FamilySpec fam;
  fam.kind = FamilyKind::Dilate;
  fam.params = {2.0, 0.5, 1.0};
  const auto members = witness_family(fam);
  REQUIRE(members.size() == 3);
  CHECK(members[0].param == 0.5);
  CHECK(members[0].f.width == doctest::Approx(2.0));
  CHECK(members[0].box_scale == doctest::Approx(2.0));
}

TEST_CASE("family names") {
  CHECK(family_from_string("modulate") == FamilyKind::Modulate);
  CHECK(to_string(FamilyKind::Dilate) == "dilate");
  CHECK_THROWS_AS(family_from_string("rotate"), std::invalid_argument);
}

TEST_CASE("empty region scan writes only the header") {
  std::ostringstream out;
  region_scan(out, {}, {});
  std::ostringstream header;
  write_ratio_csv_header(header);
  CHECK(out.str() == header.str());
}

TEST_CASE("dyadic partition telescopes") {
  DyadicPartition part(5);
  for (double r : {0.0, 0.5, 1.5, 3.0, 10.0, 40.0, 70.0}) {
    double s = 0.0;
    for (int j = 0; j <= 5; ++j) s += DyadicPartition::piece(j, r);
    CHECK(std::abs(s - part.envelope(r)) < 1e-14);
  }
  CHECK(DyadicPartition::piece(3, 1.0) == 0.0);
  CHECK(DyadicPartition::piece(3, 40.0) == 0.0);
  GridSpec spec(32, 8.0);
  auto g = sample_gaussian(spec, {{0, 0, 0}, 1.0});
  const auto pieces = dyadic_decompose(g, 3);
  REQUIRE(pieces.size() == 4);
  auto sum = pieces[0];
  for (std::size_t j = 1; j < pieces.size(); ++j) sum += pieces[j];
  CHECK(max_abs_diff(sum, dyadic_envelope(g, 3)) < 1e-14);
  CHECK(dyadic_norm(g, 0.0, 3) > 0.0);
}
