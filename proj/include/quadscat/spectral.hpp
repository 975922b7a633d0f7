#pragma once

// Fourier multipliers, wave propagators and weighted Sobolev norms
// ||<x>^a <D>^b u||_{L^2} on the periodic grid.

#include <cstdint>
#include <vector>

#include "quadscat/grid.hpp"
#include "quadscat/spacetime.hpp"

namespace quadscat {

/// <D>^b: multiplication by (1 + |xi|^2)^{b/2} on the transform side.
ScalarField bessel_multiplier(const ScalarField& f, double b);
/// <x>^a: pointwise multiplication by (1 + |x|^2)^{a/2}.
ScalarField spatial_weight(const ScalarField& f, double a);
/// |D|: multiplication by |xi|.
ScalarField abs_derivative(const ScalarField& f);
/// Laplacian and gradient components, spectrally.
ScalarField laplacian(const ScalarField& f);
ScalarField partial_derivative(const ScalarField& f, int axis);

enum class OperatorOrder {
  WeightOutside,  ///< ||<x>^a <D>^b u||, the defining norm
  WeightInside,   ///< ||<D>^b <x>^a u||, the equivalent norm
};

/// Weighted Sobolev norm.  A frequency-space field is measured as a function
/// on its own lattice (xi plays the role of x), so the Fourier mapping
/// H_(a,b) -> H_(b,a) can be compared directly.
double sobolev_norm(const ScalarField& f, SobolevIndex idx, OperatorOrder order = OperatorOrder::WeightOutside);

/// cos(t|D|) f.
ScalarField cosine_propagator(const ScalarField& f, double t);
/// sin(t|D|)/|D| f, with the value t at xi = 0.
ScalarField sine_propagator(const ScalarField& f, double t);

/// Multiplier arrays (native FFT order) for identity checks on the symbols.
std::vector<double> cosine_symbol(const GridSpec& spec, double t);
std::vector<double> sine_symbol(const GridSpec& spec, double t);

/// (Ku)(x, t_k) = cos(t_k |D|) u for t_k = k * dt, k = 0 .. count-1.
SpaceTimeField apply_K(const ScalarField& u, double dt, std::size_t count);

/// Fraction of ||f||^2 lying outside the ball |x - center| <= radius.
double energy_fraction_outside(const ScalarField& f, const Vec3& center, double radius);

struct CommutatorProbeOptions {
  std::size_t trials = 8;       ///< random restarts
  std::size_t iterations = 20;  ///< power iterations per restart
  std::uint64_t seed = 0;
  std::size_t grid_points = 32;
  double half_width = 8.0;
};

struct CommutatorProbeResult {
  double estimate = 0.0;  ///< best lower bound on the operator norm
  bool converged = false;
  std::size_t trials = 0;
  std::uint64_t seed = 0;
};

/// Lower-bound estimate of ||<D>^b <x>^{it} <D>^{-b}||_{L^2 -> L^2} by power
/// iteration on P*P from random starts.  Each trial draws from its own stream
/// seeded by (seed, trial), so results do not depend on scheduling.
CommutatorProbeResult commutator_growth_probe(double b, double t, const CommutatorProbeOptions& options = {});

}  // namespace quadscat
