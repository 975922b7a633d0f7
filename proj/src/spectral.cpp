#include "quadscat/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "quadscat/fft.hpp"

namespace quadscat {
namespace {

// A frequency-space field viewed as a position field on its own lattice.
ScalarField on_sample_grid(const ScalarField& f) {
  if (f.space() == Space::Position) return f;
  CVec values(f.values().begin(), f.values().end());
  return ScalarField(f.spec().dual(), Space::Position, std::move(values));
}

}  // namespace

ScalarField bessel_multiplier(const ScalarField& f, double b) {
  require_space(f, Space::Position, "bessel_multiplier");
  if (b == 0.0) return f;
  return fft::Spectrum(f).apply([b](double x, double y, double z) {
    return cplx(std::pow(1.0 + x * x + y * y + z * z, 0.5 * b), 0.0);
  });
}

ScalarField spatial_weight(const ScalarField& f, double a) {
  require_space(f, Space::Position, "spatial_weight");
  if (a == 0.0) return f;
  ScalarField out = f;
  const GridSpec& spec = f.spec();
  const std::size_t n = spec.points();
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      for (std::size_t k = 0; k < n; ++k) {
        const double r2 = spec.coord(i) * spec.coord(i) + spec.coord(j) * spec.coord(j) + spec.coord(k) * spec.coord(k);
        out[spec.index(i, j, k)] *= std::pow(1.0 + r2, 0.5 * a);
      }
  return out;
}

ScalarField abs_derivative(const ScalarField& f) {
  require_space(f, Space::Position, "abs_derivative");
  return fft::Spectrum(f).apply(
      [](double x, double y, double z) { return cplx(std::sqrt(x * x + y * y + z * z), 0.0); });
}

ScalarField laplacian(const ScalarField& f) {
  require_space(f, Space::Position, "laplacian");
  return fft::Spectrum(f).apply([](double x, double y, double z) { return cplx(-(x * x + y * y + z * z), 0.0); });
}

ScalarField partial_derivative(const ScalarField& f, int axis) {
  require_space(f, Space::Position, "partial_derivative");
  if (axis < 0 || axis > 2) throw std::invalid_argument("partial_derivative: axis must be 0, 1 or 2");
  return fft::Spectrum(f).apply([axis](double x, double y, double z) {
    const double xi = axis == 0 ? x : (axis == 1 ? y : z);
    return cplx(0.0, xi);
  });
}

double sobolev_norm(const ScalarField& f, SobolevIndex idx, OperatorOrder order) {
  const ScalarField g = on_sample_grid(f);
  if (order == OperatorOrder::WeightOutside) return l2_norm(spatial_weight(bessel_multiplier(g, idx.b), idx.a));
  return l2_norm(bessel_multiplier(spatial_weight(g, idx.a), idx.b));
}

ScalarField cosine_propagator(const ScalarField& f, double t) {
  require_space(f, Space::Position, "cosine_propagator");
  if (t < 0.0) throw std::invalid_argument("cosine_propagator: t must be nonnegative");
  if (t == 0.0) return f;
  return fft::Spectrum(f).apply(
      [t](double x, double y, double z) { return cplx(std::cos(t * std::sqrt(x * x + y * y + z * z)), 0.0); });
}

namespace {

double sinc_symbol(double t, double lambda) { return lambda == 0.0 ? t : std::sin(t * lambda) / lambda; }

}  // namespace

ScalarField sine_propagator(const ScalarField& f, double t) {
  require_space(f, Space::Position, "sine_propagator");
  if (t < 0.0) throw std::invalid_argument("sine_propagator: t must be nonnegative");
  if (t == 0.0) return ScalarField(f.spec(), Space::Position);
  return fft::Spectrum(f).apply(
      [t](double x, double y, double z) { return cplx(sinc_symbol(t, std::sqrt(x * x + y * y + z * z)), 0.0); });
}

namespace {

template <class Symbol>
std::vector<double> symbol_array(const GridSpec& spec, Symbol&& symbol) {
  const std::size_t n = spec.points();
  std::vector<double> out(spec.size());
  for (std::size_t p = 0; p < n; ++p)
    for (std::size_t q = 0; q < n; ++q)
      for (std::size_t r = 0; r < n; ++r) {
        const double x = spec.freq_native(p), y = spec.freq_native(q), z = spec.freq_native(r);
        out[spec.index(p, q, r)] = symbol(std::sqrt(x * x + y * y + z * z));
      }
  return out;
}

}  // namespace

std::vector<double> cosine_symbol(const GridSpec& spec, double t) {
  return symbol_array(spec, [t](double lambda) { return std::cos(t * lambda); });
}

std::vector<double> sine_symbol(const GridSpec& spec, double t) {
  return symbol_array(spec, [t](double lambda) { return std::sin(t * lambda); });
}

SpaceTimeField apply_K(const ScalarField& u, double dt, std::size_t count) {
  require_space(u, Space::Position, "apply_K");
  SpaceTimeField out(u.spec(), dt);
  if (count == 0) return out;
  const fft::Spectrum spectrum(u);
  out.push_back(u);
  for (std::size_t k = 1; k < count; ++k) {
    const double t = static_cast<double>(k) * dt;
    out.push_back(spectrum.apply(
        [t](double x, double y, double z) { return cplx(std::cos(t * std::sqrt(x * x + y * y + z * z)), 0.0); }));
  }
  return out;
}

double energy_fraction_outside(const ScalarField& f, const Vec3& center, double radius) {
  const GridSpec grid = f.sample_grid();
  const std::size_t n = grid.points();
  double outside = 0.0, total = 0.0;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      for (std::size_t k = 0; k < n; ++k) {
        const double dx = grid.coord(i) - center[0], dy = grid.coord(j) - center[1], dz = grid.coord(k) - center[2];
        const double e = std::norm(f[grid.index(i, j, k)]);
        total += e;
        if (dx * dx + dy * dy + dz * dz > radius * radius) outside += e;
      }
  return total > 0.0 ? outside / total : 0.0;
}

namespace {

// P = <D>^b W <D>^{-b} with W = <x>^{i t}; the adjoint uses W^{-1} and -b.
class CommutatorOperator {
 public:
  CommutatorOperator(const GridSpec& spec, double b, double t) : spec_(spec), b_(b), weight_(spec.size()) {
    trivial_weight_ = (t == 0.0);
    const std::size_t n = spec.points();
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j)
        for (std::size_t k = 0; k < n; ++k) {
          const double r2 =
              spec.coord(i) * spec.coord(i) + spec.coord(j) * spec.coord(j) + spec.coord(k) * spec.coord(k);
          weight_[spec.index(i, j, k)] = std::polar(1.0, 0.5 * t * std::log1p(r2));
        }
  }

  ScalarField apply(const ScalarField& f, bool adjoint) const {
    if (trivial_weight_) return f;
    const double b = adjoint ? -b_ : b_;
    ScalarField g = bessel_multiplier(f, -b);
    for (std::size_t i = 0; i < g.size(); ++i) g[i] *= adjoint ? std::conj(weight_[i]) : weight_[i];
    return bessel_multiplier(g, b);
  }

 private:
  GridSpec spec_;
  double b_;
  CVec weight_;
  bool trivial_weight_ = false;
};

}  // namespace

CommutatorProbeResult commutator_growth_probe(double b, double t, const CommutatorProbeOptions& options) {
  const GridSpec spec(options.grid_points, options.half_width);
  const CommutatorOperator op(spec, b, t);
  CommutatorProbeResult result;
  result.trials = options.trials;
  result.seed = options.seed;

  for (std::size_t trial = 0; trial < options.trials; ++trial) {
    std::seed_seq seq{static_cast<std::uint32_t>(options.seed), static_cast<std::uint32_t>(options.seed >> 32),
                      static_cast<std::uint32_t>(trial)};
    std::mt19937_64 rng(seq);
    std::normal_distribution<double> normal;
    ScalarField v(spec, Space::Position);
    for (auto& x : v.values()) x = {normal(rng), normal(rng)};
    v *= 1.0 / l2_norm(v);

    double estimate = l2_norm(op.apply(v, false)) / l2_norm(v);
    double previous = estimate;
    bool converged = false;
    for (std::size_t it = 0; it < options.iterations; ++it) {
      ScalarField w = op.apply(op.apply(v, false), true);
      const double nw = l2_norm(w);
      if (nw == 0.0) break;
      v = (1.0 / nw) * std::move(w);
      estimate = std::max(estimate, l2_norm(op.apply(v, false)) / l2_norm(v));
      converged = std::abs(estimate - previous) <= 1e-6 * estimate;
      previous = estimate;
    }
    if (estimate > result.estimate) {
      result.estimate = estimate;
      result.converged = converged;
    }
  }
  return result;
}

}  // namespace quadscat
