#include "quadscat/dyadic.hpp"

#include <cmath>

namespace quadscat {

DyadicPartition::DyadicPartition(int levels) : levels_(levels) {
  if (levels < 0) throw std::invalid_argument("DyadicPartition: levels must be nonnegative");
}

double DyadicPartition::profile(double r) {
  if (r <= 1.0) return 1.0;
  if (r >= 2.0) return 0.0;
  const double u = r - 1.0;
  return 1.0 - u * u * u * (10.0 - 15.0 * u + 6.0 * u * u);
}

double DyadicPartition::piece(int j, double r) {
  if (j == 0) return profile(r);
  return profile(std::ldexp(r, -j)) - profile(std::ldexp(r, 1 - j));
}

double DyadicPartition::envelope(double r) const { return profile(std::ldexp(r, -levels_)); }

namespace {

template <class Weight>
ScalarField weighted(const ScalarField& f, Weight&& w) {
  require_space(f, Space::Position, "dyadic");
  const GridSpec& spec = f.spec();
  const std::size_t n = spec.points();
  ScalarField out(spec, Space::Position);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      for (std::size_t k = 0; k < n; ++k) {
        const std::size_t m = spec.index(i, j, k);
        const double r =
            std::sqrt(spec.coord(i) * spec.coord(i) + spec.coord(j) * spec.coord(j) + spec.coord(k) * spec.coord(k));
        out[m] = w(r) * f[m];
      }
  return out;
}

}  // namespace

std::vector<ScalarField> dyadic_decompose(const ScalarField& f, int levels) {
  const DyadicPartition partition(levels);
  std::vector<ScalarField> pieces;
  pieces.reserve(static_cast<std::size_t>(levels) + 1);
  for (int j = 0; j <= partition.levels(); ++j) {
    pieces.push_back(weighted(f, [j](double r) { return DyadicPartition::piece(j, r); }));
  }
  return pieces;
}

double dyadic_norm(const ScalarField& f, double rho, int levels) {
  double acc = 0.0;
  const auto pieces = dyadic_decompose(f, levels);
  for (std::size_t j = 0; j < pieces.size(); ++j) {
    const double nj = l2_norm(pieces[j]);
    acc += std::exp2(2.0 * rho * static_cast<double>(j)) * nj * nj;
  }
  return std::sqrt(acc);
}

ScalarField dyadic_envelope(const ScalarField& f, int levels) {
  const DyadicPartition partition(levels);
  return weighted(f, [&](double r) { return partition.envelope(r); });
}

}  // namespace quadscat
