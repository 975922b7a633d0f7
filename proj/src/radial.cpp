#include "quadscat/radial.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "quadscat/dyadic.hpp"
#include "quadscat/grid.hpp"
#include "quadscat/quadrature.hpp"

namespace quadscat {

double smooth_bump(double u) {
  const double v = 1.0 - u * u;
  return v > 0.0 ? std::exp(-1.0 / v) : 0.0;
}

RadialFunction shell_bump(double r) {
  if (!(r > 0.0)) throw std::invalid_argument("shell_bump: radius must be positive");
  return {[r](double rho) { return smooth_bump((rho - 1.25 * r) / (0.75 * r)); }, 0.5 * r, 2.0 * r};
}

RadialFunction ball_bump(double s) {
  if (!(s > 0.0)) throw std::invalid_argument("ball_bump: radius must be positive");
  return {[s](double rho) { return smooth_bump(rho / s); }, 0.0, s};
}

RadialFunction gaussian_radial(double width, double sigmas) {
  if (!(width > 0.0)) throw std::invalid_argument("gaussian_radial: width must be positive");
  const double c = 1.0 / (2.0 * width * width);
  return {[c](double rho) { return std::exp(-c * rho * rho); }, 0.0, sigmas * width};
}

RadialFunction dyadic_piece(const RadialFunction& f, int j) {
  if (j < 0) throw std::invalid_argument("dyadic_piece: level must be >= 0");
  const double lo = j == 0 ? 0.0 : std::ldexp(1.0, j - 1);
  const double hi = std::ldexp(1.0, j + 1);
  auto profile = f.profile;
  return {[profile, j](double rho) { return DyadicPartition::piece(j, rho) * profile(rho); },
          std::max(f.inner, lo), std::min(f.outer, hi)};
}

double radial_weighted_norm(const RadialFunction& f, double a) {
  static const GaussRule rule = gauss_legendre(8);
  const double v = integrate_gl(
      [&](double r) {
        const double p = f.profile(r);
        return std::pow(1.0 + r * r, a) * p * p * r * r;
      },
      f.inner, f.outer, rule, 128);
  return std::sqrt(4.0 * kPi * v);
}

namespace {

double radial_S_impl(const RadialFunction& phi, const RadialFunction& psi, double rho, double t, const GaussRule& rule,
                     int panels) {
  if (rho <= 1e-12 * std::max(1.0, t)) return 4.0 * kPi * t * phi.profile(t) * psi.profile(t);
  const double two_r2 = 2.0 * (rho * rho + t * t);
  double lo = std::max({std::abs(rho - t), psi.inner, std::sqrt(std::max(0.0, two_r2 - phi.outer * phi.outer))});
  double hi = std::min(rho + t, psi.outer);
  if (two_r2 < phi.inner * phi.inner) return 0.0;
  hi = std::min(hi, std::sqrt(two_r2 - phi.inner * phi.inner));
  if (!(hi > lo)) return 0.0;
  const double v = integrate_gl(
      [&](double w) { return phi.profile(std::sqrt(std::max(0.0, two_r2 - w * w))) * psi.profile(w) * w; }, lo, hi,
      rule, static_cast<std::size_t>(panels));
  return 2.0 * kPi / rho * v;
}

}  // namespace

double radial_S(const RadialFunction& phi, const RadialFunction& psi, double rho, double t) {
  if (t < 0.0) return -radial_S(phi, psi, rho, -t);
  static const GaussRule rule = gauss_legendre(8);
  return radial_S_impl(phi, psi, rho, t, rule, 16);
}

double radial_S_norm(const RadialFunction& phi, const RadialFunction& psi, double a, const RadialQuadrature& quad) {
  const GaussRule rule = gauss_legendre(static_cast<std::size_t>(quad.order));
  const double r_lo = std::sqrt(0.5 * (phi.inner * phi.inner + psi.inner * psi.inner));
  const double r_hi = std::sqrt(0.5 * (phi.outer * phi.outer + psi.outer * psi.outer));
  const double band = std::min(phi.outer, psi.outer);
  const double q = 0.25 * kPi;

  auto angular = [&](double R) {
    const double alpha = std::asin(std::min(1.0, band / (std::sqrt(2.0) * R)));
    const double lo = std::max(0.0, q - alpha), hi = std::min(0.5 * kPi, q + alpha);
    auto integrand = [&](double theta) {
      const double rho = R * std::cos(theta), t = R * std::sin(theta);
      const double s = radial_S_impl(phi, psi, rho, t, rule, quad.inner_panels);
      return s * s * rho * rho;
    };
    return integrate_gl(integrand, lo, q, rule, quad.angular_panels) +
           integrate_gl(integrand, q, hi, rule, quad.angular_panels);
  };
  const double v = integrate_gl([&](double R) { return std::pow(1.0 + R * R, a) * R * angular(R); }, r_lo, r_hi,
                                rule, quad.radial_panels);
  return std::sqrt(2.0 * 4.0 * kPi * v);
}

ShellTestRow shell_test(double r, double s, double a, const RadialQuadrature& quad) {
  ShellTestRow row;
  row.r = r;
  row.s = s;
  row.a = a;
  const RadialFunction phi = shell_bump(r), psi = ball_bump(s);
  row.norm_S = radial_S_norm(phi, psi, a, quad);
  const double weight = std::max(std::pow(1.0 + r * r, 0.5 * a), std::pow(1.0 + (r + s) * (r + s), 0.5 * a));
  row.bound = (s / r) * weight * radial_weighted_norm(phi) * radial_weighted_norm(psi);
  row.ratio = row.norm_S / row.bound;
  return row;
}

std::vector<DyadicDecayRow> dyadic_cross_decay(const RadialFunction& f, const RadialFunction& g, double a1, double a2,
                                               double a, int levels, const RadialQuadrature& quad) {
  const double eps = 1.0 + std::min(a1, a2) - a;
  std::vector<RadialFunction> fp, gp;
  std::vector<double> s, sigma;
  for (int j = 0; j <= levels; ++j) {
    fp.push_back(dyadic_piece(f, j));
    gp.push_back(dyadic_piece(g, j));
    s.push_back(std::pow(2.0, a1 * j) * radial_weighted_norm(fp.back()));
    sigma.push_back(std::pow(2.0, a2 * j) * radial_weighted_norm(gp.back()));
  }
  std::vector<DyadicDecayRow> rows;
  for (int j = 0; j <= levels; ++j)
    for (int k = 0; k <= levels; ++k) {
      DyadicDecayRow row;
      row.j = j;
      row.k = k;
      row.s_j = s[j];
      row.sigma_k = sigma[k];
      row.norm_S = radial_S_norm(fp[j], gp[k], a, quad);
      row.scaled = row.norm_S * std::pow(2.0, eps * std::abs(j - k)) / (row.s_j * row.sigma_k);
      rows.push_back(row);
    }
  return rows;
}

}  // namespace quadscat
