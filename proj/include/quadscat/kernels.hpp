#pragma once

// One-dimensional oracles for the wave kernels in odd dimension n:
// the polynomial p of the kappa_0 formula, pairings of kappa_0 and k_0 with
// test functions, the fundamental solution E reduced to radial profiles, and
// the Hardy transform behind the tail operator T.

#include <boost/rational.hpp>
#include <cstdint>
#include <string>
#include <vector>

#include "quadscat/grid.hpp"
#include "quadscat/spacetime.hpp"
#include "quadscat/sphere.hpp"

namespace quadscat {

using Rational = boost::rational<std::int64_t>;

/// p(s) = (m! (4 pi)^{m+1})^{-1} (-d/ds)^{m+1} (1 - s^2)^m, m = (n-3)/2,
/// stored as pi^{-(m+1)} * sum_k coeffs[k] s^k with exact rational coeffs.
struct KernelPolynomial {
  int n = 3;
  int m = 0;
  std::vector<Rational> coeffs;  ///< empty means p == 0

  int degree() const;            ///< -1 for the zero polynomial
  double operator()(double s) const;
  double pi_scale() const;       ///< pi^{-(m+1)}
  std::string to_string() const; ///< e.g. "-3/16 s / pi^3", "0"
};

/// Throws std::invalid_argument for even or n < 3.
KernelPolynomial p_polynomial(int n);

/// pi (2 pi)^{-(n+1)/2} = 2^{-(m+2)} pi^{-(m+1)}.
double kappa0_main_coefficient(int n);

/// phi~(t_k) = \int_{S^2} phi(t_k w) dw on t_k = k dt, k = 0 .. size-1.
class RadialProfile {
 public:
  RadialProfile(double dt, std::vector<cplx> values);

  double dt() const { return dt_; }
  std::size_t size() const { return values_.size(); }
  double t_max() const { return dt_ * static_cast<double>(values_.size() - 1); }
  double t(std::size_t k) const { return dt_ * static_cast<double>(k); }
  const std::vector<cplx>& values() const { return values_; }
  cplx operator[](std::size_t k) const { return values_[k]; }
  /// Linear interpolation; throws std::out_of_range beyond [0, t_max].
  cplx at(double t) const;

  template <class Fn>
  static RadialProfile sample(Fn&& fn, double dt, std::size_t count) {
    std::vector<cplx> v(count);
    for (std::size_t k = 0; k < count; ++k) v[k] = fn(dt * static_cast<double>(k));
    return RadialProfile(dt, std::move(v));
  }

 private:
  double dt_;
  std::vector<cplx> values_;
};

/// Profile of a grid field through spherical_pairing.
RadialProfile profile_from_field(const ScalarField& phi, double dt, std::size_t count, const SphereQuadrature& quad);

/// <kappa_0(., t), phi> = pi (2 pi)^{-(n+1)/2} t^{m+1} phi~(t) + \int_t^inf p(t/r) r^m phi~(r) dr,
/// trapezoid on the profile grid.  Warns when the profile has not decayed at t_max.
cplx kappa0_pairing(const RadialProfile& profile, double t, int n, Diagnostics* diag = nullptr);

/// <k_0(., t), phi> for n = 3 via the sine propagator applied to phi(-x),
/// read off at the origin node.
cplx k0_pairing_multiplier(const ScalarField& phi, double t);

struct PairingResult {
  cplx value{0.0, 0.0};
  double scale = 0.0;  ///< magnitude reference for absolute tolerances
};

/// <E, phi (x) psi> for n = 3: (16 pi^2)^{-1} \int (t phi~)' t psi~ dt.
PairingResult E_pairing_direct(const RadialProfile& phi, const RadialProfile& psi);
/// <E, phi (x) psi> = -\int <k_0(t), phi> d/dt <k_0(t), psi> dt for n = 3.
PairingResult E_pairing_4AM(const RadialProfile& phi, const RadialProfile& psi);

struct HardyResult {
  std::vector<double> H;  ///< H(t_k); H[0] is +inf when h(0) > 0
  double integral_H2 = 0.0;
  double integral_h2 = 0.0;
  double ratio = 0.0;  ///< integral_H2 / integral_h2, 0 when h == 0
};

/// H(t) = \int_t^T h(r)/r dr for piecewise-linear h on t_k = k dt, by exact
/// product integration (log terms per interval); int H^2 is exact on the
/// first interval and Gauss-Legendre elsewhere.
HardyResult hardy_transform(const std::vector<double>& h, double dt, Diagnostics* diag = nullptr);

/// T(x, t_k) = \int_{t_k}^inf p(t_k/r) r^{-1} S(x, r) dr, trapezoid over the slice grid.
SpaceTimeField tail_operator_T(const SpaceTimeField& S, int n);

}  // namespace quadscat
