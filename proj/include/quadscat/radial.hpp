#pragma once

// Radial reductions on R^3.  For radial phi, psi the spherical mean
// S(phi, psi)(x, t) depends on (|x|, t) only:
//
//     S(rho, t) = (2 pi / rho) \int phi(sqrt(2 rho^2 + 2 t^2 - w^2)) psi(w) w dw,
//
// w over [|rho - t|, rho + t], with S(0, t) = 4 pi t phi(t) psi(t).  This makes
// multi-scale norms of S cheap enough to sweep over radii no grid could hold.

#include <functional>
#include <vector>

namespace quadscat {

struct RadialFunction {
  std::function<double(double)> profile;
  double inner = 0.0;  ///< profile vanishes for r < inner
  double outer = 0.0;  ///< profile vanishes for r > outer
};

/// exp(-1/(1 - u^2)) on |u| < 1, zero elsewhere.
double smooth_bump(double u);

/// Bump supported in r/2 < |x| < 2r.
RadialFunction shell_bump(double r);
/// Bump supported in |x| < s.
RadialFunction ball_bump(double s);
/// exp(-|x|^2 / (2 w^2)), cut at `sigmas` widths.
RadialFunction gaussian_radial(double width, double sigmas = 9.0);
/// chi_j f for the quintic-smoothstep dyadic partition.
RadialFunction dyadic_piece(const RadialFunction& f, int j);

/// ||<x>^a f||_{L^2(R^3)}.
double radial_weighted_norm(const RadialFunction& f, double a = 0.0);

double radial_S(const RadialFunction& phi, const RadialFunction& psi, double rho, double t);

struct RadialQuadrature {
  int radial_panels = 24;
  int angular_panels = 12;
  int inner_panels = 6;
  int order = 8;  ///< Gauss-Legendre points per panel
};

/// ||<x, t>^a S(phi, psi)||_{L^2(R^4)}, using that S is odd in t.
double radial_S_norm(const RadialFunction& phi, const RadialFunction& psi, double a,
                     const RadialQuadrature& quad = {});

struct ShellTestRow {
  double r = 0.0, s = 0.0, a = 0.0;
  double norm_S = 0.0;
  double bound = 0.0;  ///< (s/r) max(<r>^a, <r+s>^a) ||phi|| ||psi||
  double ratio = 0.0;
};

/// Shell-function estimate: phi a shell bump at radius r, psi a ball bump of radius s.
ShellTestRow shell_test(double r, double s, double a, const RadialQuadrature& quad = {});

struct DyadicDecayRow {
  int j = 0, k = 0;
  double norm_S = 0.0;  ///< ||S(chi_j f, chi_k g)||_(a,0)
  double s_j = 0.0, sigma_k = 0.0;
  double scaled = 0.0;  ///< norm_S * 2^{eps |j-k|} / (s_j sigma_k)
};

/// Cross-piece decay table over 0 <= j, k <= levels with
/// eps = 1 + min(a1, a2) - a.
std::vector<DyadicDecayRow> dyadic_cross_decay(const RadialFunction& f, const RadialFunction& g, double a1, double a2,
                                               double a, int levels, const RadialQuadrature& quad = {});

}  // namespace quadscat
