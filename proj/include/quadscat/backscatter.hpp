#pragma once

// The bilinear operator A(f, g)(x, t) = \int k_0(y, t) f(x - y) g(x + y) dy,
// the quadratic backscattering operator
//
//     B_2(f, g) = -4 \int_0^inf cos(t|D|) A(f, g)(., t) dt,
//
// and the trilinear form Q(f, g, h) = \int h B_2(f, g).  In dimension 3,
// A = S / (4 pi) with S the bilinear spherical mean.

#include <cstddef>
#include <optional>
#include <vector>

#include "quadscat/grid.hpp"
#include "quadscat/spacetime.hpp"
#include "quadscat/sphere.hpp"

namespace quadscat {

enum class TimeRule {
  Trapezoid,          ///< plain trapezoid on t_k = k h
  EndpointCorrected,  ///< trapezoid plus Euler-Maclaurin terms at t = 0
};

struct PipelineConfig {
  /// Index of the last time slice (t_K = K h); chosen from the supports when empty.
  std::optional<std::size_t> K;
  double horizon_margin = 1.2;  ///< auto K: t_K >= margin (r_f + r_g)
  TimeRule time_rule = TimeRule::EndpointCorrected;
  Interpolation interpolation = Interpolation::Spectral;
  /// Effective support radii; measured from the fields when empty.
  std::optional<double> support_f;
  std::optional<double> support_g;
};

/// Relative amplitude e^{-18} that defines the effective support: for a
/// Gaussian it is reached exactly on the 6-sigma sphere.
inline constexpr double kSupportThreshold = 1.522997974471263e-08;

/// Box-centered effective support radius of a sampled field.
double support_radius(const ScalarField& f);

/// K actually used by the pipelines for (f, g) under config.
std::size_t resolve_slice_index(const ScalarField& f, const ScalarField& g, const PipelineConfig& config);

/// A(., t_k), k = 0 .. K, for n = 3: c_n S + T with c_3 = 1/(4 pi) and T = 0.
SpaceTimeField A_time_route(const ScalarField& f, const ScalarField& g, const SphereQuadrature& quad,
                            const PipelineConfig& config = {}, Diagnostics* diag = nullptr);

/// d_t^m (pi (2 pi)^{-(n+1)/2} S + T(S)) on the slice grid (centered differences for m > 0).
SpaceTimeField assemble_A(const SpaceTimeField& S, int n);

struct FourierTestPoint {
  Vec3 xi{0.0, 0.0, 0.0};
  double tau = 0.0;
};

struct FourierCheckRow {
  FourierTestPoint point;
  cplx lhs{0.0, 0.0};  ///< transform of the time-route A at (xi, tau)
  cplx rhs{0.0, 0.0};  ///< S(f^, g^)(xi/2, tau/2) / (8 i (2 pi)^2)
  double rel_err = 0.0;
};

/// Compares the space-time transform of A with the spherical mean of the
/// transforms.  Rejects |tau| > pi/h and xi outside the frequency box.
std::vector<FourierCheckRow> A_fourier_check(const ScalarField& f, const ScalarField& g,
                                             const std::vector<FourierTestPoint>& points, const SphereQuadrature& quad,
                                             const PipelineConfig& config = {}, Diagnostics* diag = nullptr);

/// Space-time transform of slices u(x, t_k) of an odd-in-t field.
cplx odd_spacetime_transform(const SpaceTimeField& u, const Vec3& xi, double tau);

/// B_2(f, g), streamed slice by slice.  Warns when t_K < r_f + r_g.
ScalarField B2(const ScalarField& f, const ScalarField& g, const SphereQuadrature& quad,
               const PipelineConfig& config = {}, Diagnostics* diag = nullptr);

struct QResult {
  cplx route_i{0.0, 0.0};   ///< \int h B_2(f, g)
  cplx route_ii{0.0, 0.0};  ///< -4 sum_k w_k \int A(., t_k) cos(t_k|D|) h
  double rel_diff = 0.0;
  std::size_t K = 0;
};

QResult Q_form(const ScalarField& f, const ScalarField& g, const ScalarField& h, const SphereQuadrature& quad,
               const PipelineConfig& config = {}, Diagnostics* diag = nullptr);

/// Energy fraction of field outside |x - center| <= sqrt(r_f^2 + r_g^2) + 3h.
double support_check(double r_f, double r_g, const ScalarField& field, const Vec3& center = {0.0, 0.0, 0.0});
double support_check(const ScalarField& f, const ScalarField& g, const ScalarField& field);

/// Fraction of ||u||^2 not captured by its spherical average about the origin.
double nonradial_fraction(const ScalarField& u);

}  // namespace quadscat
