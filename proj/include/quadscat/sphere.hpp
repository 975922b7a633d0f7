#pragma once

// Quadrature on S^2, off-grid sampling, the bilinear spherical mean
//
//     S(f, g)(x, t) = t \int_{S^2} f(x + t w) g(x - t w) dw,
//
// the spherical pairing phi~(t) = \int_{S^2} phi(t w) dw, and a Monte Carlo
// estimate of the cap measure meas{w : r/2 < |x - t w| < 2r, |x + t w| < s}.

#include <cstdint>
#include <filesystem>
#include <optional>
#include <vector>

#include "quadscat/fft.hpp"
#include "quadscat/grid.hpp"
#include "quadscat/spacetime.hpp"

namespace quadscat {

/// Antipodally symmetric node set: node i + size()/2 is exactly -node i and
/// carries the same weight.
class SphereQuadrature {
 public:
  /// Gauss-Legendre in cos(theta) times the uniform rule in phi, exact for
  /// spherical polynomials up to `degree` (built-in default set).
  static SphereQuadrature product_gauss(int degree = 14);
  /// Plain-text node file, one "wx wy wz weight" line per node; '#' comments.
  static SphereQuadrature from_file(const std::filesystem::path& path, int degree);
  /// Validates unit nodes, positive weights, total 4 pi and antipodal symmetry,
  /// then reorders into antipodal pairs.
  static SphereQuadrature from_nodes(const std::vector<Vec3>& nodes, const std::vector<double>& weights, int degree);

  const std::vector<Vec3>& nodes() const { return nodes_; }
  const std::vector<double>& weights() const { return weights_; }
  int degree() const { return degree_; }
  std::size_t size() const { return nodes_.size(); }
  std::size_t pairs() const { return nodes_.size() / 2; }

  void write(const std::filesystem::path& path) const;

 private:
  SphereQuadrature(std::vector<Vec3> nodes, std::vector<double> weights, int degree)
      : nodes_(std::move(nodes)), weights_(std::move(weights)), degree_(degree) {}

  std::vector<Vec3> nodes_;
  std::vector<double> weights_;
  int degree_;
};

enum class Interpolation {
  Trilinear,  ///< order-2, periodic wrap
  Spectral,   ///< trigonometric interpolant of the samples (band-limited)
};

/// Values of a field at arbitrary points of its sample lattice (position
/// grid or frequency lattice, periodic wrap).
std::vector<cplx> sample_offgrid(const ScalarField& f, const std::vector<Vec3>& points,
                                 Interpolation method = Interpolation::Trilinear);

/// Reusable spectral evaluator: precomputes the transform once.
class SpectralSampler {
 public:
  explicit SpectralSampler(const ScalarField& f);
  /// Evaluates the continuous transform h^3 sum_x f(x) exp(-i x.xi) of a
  /// position field at arbitrary xi.
  static SpectralSampler transform_of(const ScalarField& f);
  cplx operator()(const Vec3& point) const;

 private:
  SpectralSampler(std::size_t n, CVec coeffs, std::vector<double> nodes, double sign, double scale)
      : n_(n), coeffs_(std::move(coeffs)), nodes_(std::move(nodes)), sign_(sign), scale_(scale) {}

  std::size_t n_;
  CVec coeffs_;
  std::vector<double> nodes_;  // 1D frequencies (or positions) conjugate to the samples
  double sign_;                // +1 for position fields, -1 for frequency fields
  double scale_;
};

/// Box-centered radius beyond which |f| <= rel_threshold * max|f|.
double effective_radius(const ScalarField& f, double rel_threshold = 1e-10);

struct SphericalMeanOptions {
  Interpolation interpolation = Interpolation::Spectral;
  /// Support radii of f and g; estimated from the fields when absent.
  std::optional<double> support_f;
  std::optional<double> support_g;
};

/// Evaluates S(f, g)(., t) for many t, reusing the transforms of f and g.
/// Keeps references to f, g and quad, which must outlive it.  evaluate_into
/// may be called concurrently.
class SphericalMeanEvaluator {
 public:
  SphericalMeanEvaluator(const ScalarField& f, const ScalarField& g, const SphereQuadrature& quad,
                         const SphericalMeanOptions& options = {});

  const GridSpec& spec() const { return spec_; }
  /// Largest t free of wrap-around contamination: L - (r_f + r_g)/2.
  double horizon() const { return horizon_; }
  double support_f() const { return rf_; }
  double support_g() const { return rg_; }
  /// Warns once per evaluator when t exceeds the horizon.
  void check_horizon(double t, Diagnostics* diag);

  void evaluate_into(double t, std::span<cplx> out) const;
  ScalarField evaluate(double t) const;

 private:
  void shifted(bool first, const Vec3& offset, CVec& out) const;

  GridSpec spec_;
  const SphereQuadrature& quad_;
  Interpolation method_;
  bool same_;
  const ScalarField& f_;
  const ScalarField& g_;
  std::optional<fft::Spectrum> fs_, gs_;
  double rf_ = 0.0, rg_ = 0.0, horizon_ = 0.0;
  bool warned_ = false;
};

/// S(f, g)(., t) on every grid node.  Exactly symmetric in (f, g).
/// Warns when t exceeds the wrap-safe horizon L - (r_f + r_g)/2.
ScalarField bilinear_spherical_S(const ScalarField& f, const ScalarField& g, double t, const SphereQuadrature& quad,
                                 const SphericalMeanOptions& options = {}, Diagnostics* diag = nullptr);

/// Slices S(f, g)(., k dt) for k = 0 .. count-1, sharing one transform of f and g.
SpaceTimeField spherical_mean_slices(const ScalarField& f, const ScalarField& g, double dt, std::size_t count,
                                     const SphereQuadrature& quad, const SphericalMeanOptions& options = {},
                                     Diagnostics* diag = nullptr);

/// t sum_i w_i f(x + t w_i) g(x - t w_i) at one point, for fields in either
/// space, sampled off-lattice.
cplx bilinear_spherical_S_at(const ScalarField& f, const ScalarField& g, const Vec3& x, double t,
                             const SphereQuadrature& quad, Interpolation method = Interpolation::Spectral);

/// Same with prepared samplers.
cplx bilinear_spherical_S_at(const SpectralSampler& f, const SpectralSampler& g, const Vec3& x, double t,
                             const SphereQuadrature& quad);

/// sum_i w_i f(t w_i).
cplx spherical_pairing(const ScalarField& f, double t, const SphereQuadrature& quad,
                       Interpolation method = Interpolation::Spectral);

struct CapEstimate {
  double measure = 0.0;
  double stderr_ = 0.0;  ///< one Monte Carlo standard deviation
  std::size_t hits = 0;
  std::size_t samples = 0;
};

/// Monte Carlo estimate with uniform sphere samples; the sample stream
/// depends only on (samples, seed), so the estimate is monotone in s.
CapEstimate cap_measure_mc(const Vec3& x, double t, double r, double s, std::size_t samples, std::uint64_t seed);

}  // namespace quadscat
