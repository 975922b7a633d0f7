#include "quadscat/kernels.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

#include "quadscat/quadrature.hpp"
#include "quadscat/spectral.hpp"

namespace quadscat {

int KernelPolynomial::degree() const {
  for (int k = static_cast<int>(coeffs.size()) - 1; k >= 0; --k)
    if (coeffs[static_cast<std::size_t>(k)] != Rational(0)) return k;
  return -1;
}

double KernelPolynomial::pi_scale() const { return std::pow(kPi, -(m + 1)); }

double KernelPolynomial::operator()(double s) const {
  double acc = 0.0;
  for (std::size_t k = coeffs.size(); k-- > 0;) acc = acc * s + boost::rational_cast<double>(coeffs[k]);
  return acc * pi_scale();
}

std::string KernelPolynomial::to_string() const {
  if (degree() < 0) return "0";
  std::ostringstream out;
  bool first = true;
  out << '(';
  for (std::size_t k = 0; k < coeffs.size(); ++k) {
    const Rational c = coeffs[k];
    if (c == Rational(0)) continue;
    if (!first) out << (c < Rational(0) ? " - " : " + ");
    else if (c < Rational(0)) out << '-';
    first = false;
    const Rational a = c < Rational(0) ? -c : c;
    out << a.numerator();
    if (a.denominator() != 1) out << '/' << a.denominator();
    if (k >= 1) out << " s";
    if (k >= 2) out << '^' << k;
  }
  out << ") / pi^" << (m + 1);
  return out.str();
}

KernelPolynomial p_polynomial(int n) {
  if (n < 3 || n % 2 == 0) throw std::invalid_argument("p_polynomial: n must be odd and >= 3 (got " + std::to_string(n) + ")");
  KernelPolynomial p;
  p.n = n;
  p.m = (n - 3) / 2;
  const int m = p.m;

  // (1 - s^2)^m by the binomial theorem.
  std::vector<Rational> c(static_cast<std::size_t>(2 * m + 1), Rational(0));
  std::int64_t binom = 1;
  for (int i = 0; i <= m; ++i) {
    c[static_cast<std::size_t>(2 * i)] = Rational(i % 2 == 0 ? binom : -binom);
    binom = binom * (m - i) / (i + 1);
  }
  // Apply -d/ds, m + 1 times.
  for (int d = 0; d <= m; ++d) {
    std::vector<Rational> next(c.size() > 1 ? c.size() - 1 : 0, Rational(0));
    for (std::size_t k = 1; k < c.size(); ++k) next[k - 1] = -Rational(static_cast<std::int64_t>(k)) * c[k];
    c = std::move(next);
  }
  std::int64_t denom = 1;
  for (int i = 2; i <= m; ++i) denom *= i;
  for (int i = 0; i <= m; ++i) denom *= 4;
  for (auto& x : c) x /= denom;
  while (!c.empty() && c.back() == Rational(0)) c.pop_back();
  p.coeffs = std::move(c);
  return p;
}

double kappa0_main_coefficient(int n) {
  if (n < 3 || n % 2 == 0) throw std::invalid_argument("kappa0_main_coefficient: n must be odd and >= 3");
  return kPi * std::pow(2.0 * kPi, -0.5 * (n + 1));
}

RadialProfile::RadialProfile(double dt, std::vector<cplx> values) : dt_(dt), values_(std::move(values)) {
  if (!(dt > 0.0)) throw std::invalid_argument("RadialProfile: dt must be positive");
  if (values_.size() < 3) throw std::invalid_argument("RadialProfile: need at least three samples");
  for (const auto& v : values_)
    if (!std::isfinite(v.real()) || !std::isfinite(v.imag())) throw std::invalid_argument("RadialProfile: non-finite sample");
}

cplx RadialProfile::at(double t) const {
  if (t < 0.0 || t > t_max() * (1.0 + 1e-12)) {
    throw std::out_of_range("RadialProfile: t = " + std::to_string(t) + " outside [0, " + std::to_string(t_max()) + "]");
  }
  const double u = t / dt_;
  const std::size_t k = std::min(static_cast<std::size_t>(u), values_.size() - 2);
  const double frac = u - static_cast<double>(k);
  return (1.0 - frac) * values_[k] + frac * values_[k + 1];
}

RadialProfile profile_from_field(const ScalarField& phi, double dt, std::size_t count, const SphereQuadrature& quad) {
  std::vector<cplx> v(count);
  for (std::size_t k = 0; k < count; ++k) v[k] = spherical_pairing(phi, dt * static_cast<double>(k), quad);
  return RadialProfile(dt, std::move(v));
}

cplx kappa0_pairing(const RadialProfile& profile, double t, int n, Diagnostics* diag) {
  const KernelPolynomial p = p_polynomial(n);
  if (t < 0.0) throw std::invalid_argument("kappa0_pairing: t must be nonnegative");
  if (t > profile.t_max()) throw std::out_of_range("kappa0_pairing: t beyond the profile range");

  double peak = 0.0;
  for (const auto& v : profile.values()) peak = std::max(peak, std::abs(v));
  if (std::abs(profile.values().back()) > 1e-8 * peak) {
    warn(diag, "kappa0_pairing: profile has not decayed at t_max; tail integral is truncated");
  }

  const cplx main = kappa0_main_coefficient(n) * std::pow(t, p.m + 1) * profile.at(t);
  if (p.degree() < 0) return main;

  auto integrand = [&](double r, cplx value) -> cplx {
    if (r == 0.0) return p.m == 0 ? p(0.0) * value : cplx{0.0, 0.0};
    return p(t / r) * std::pow(r, p.m) * value;
  };
  // Trapezoid from t to the next node, then over the nodes.
  const std::size_t next = std::min(profile.size() - 1, static_cast<std::size_t>(std::floor(t / profile.dt())) + 1);
  cplx tail{0.0, 0.0};
  const double t_next = profile.t(next);
  if (t_next > t) tail += 0.5 * (t_next - t) * (integrand(t, profile.at(t)) + integrand(t_next, profile[next]));
  for (std::size_t k = next; k + 1 < profile.size(); ++k) {
    tail += 0.5 * profile.dt() * (integrand(profile.t(k), profile[k]) + integrand(profile.t(k + 1), profile[k + 1]));
  }
  return main + tail;
}

cplx k0_pairing_multiplier(const ScalarField& phi, double t) {
  require_space(phi, Space::Position, "k0_pairing_multiplier");
  if (t < 0.0) throw std::invalid_argument("k0_pairing_multiplier: t must be nonnegative");
  const GridSpec& spec = phi.spec();
  if (spec.points() % 2 != 0) throw std::invalid_argument("k0_pairing_multiplier: origin is not a grid node");
  const ScalarField u = sine_propagator(reflect(phi), t);
  return u[spec.origin_index()];
}

namespace {

// Centered differences, second-order one-sided closure at both ends.
std::vector<cplx> derivative(const std::vector<cplx>& a, double dt) {
  const std::size_t n = a.size();
  std::vector<cplx> d(n);
  for (std::size_t k = 1; k + 1 < n; ++k) d[k] = (a[k + 1] - a[k - 1]) / (2.0 * dt);
  d[0] = (-3.0 * a[0] + 4.0 * a[1] - a[2]) / (2.0 * dt);
  d[n - 1] = (3.0 * a[n - 1] - 4.0 * a[n - 2] + a[n - 3]) / (2.0 * dt);
  return d;
}

std::vector<cplx> times_t(const RadialProfile& p) {
  std::vector<cplx> out(p.size());
  for (std::size_t k = 0; k < p.size(); ++k) out[k] = p.t(k) * p[k];
  return out;
}

double trapezoid_weight(std::size_t k, std::size_t n, double dt) { return (k == 0 || k + 1 == n) ? 0.5 * dt : dt; }

void require_compatible(const RadialProfile& a, const RadialProfile& b) {
  if (a.size() != b.size() || a.dt() != b.dt()) throw std::invalid_argument("E pairing: profiles must share the t grid");
}

double pairing_scale(const std::vector<cplx>& a, const std::vector<cplx>& da, const std::vector<cplx>& b,
                     const std::vector<cplx>& db, double dt) {
  double s = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k)
    s += trapezoid_weight(k, a.size(), dt) * 0.5 * (std::abs(da[k]) * std::abs(b[k]) + std::abs(a[k]) * std::abs(db[k]));
  return s / (16.0 * kPi * kPi);
}

}  // namespace

PairingResult E_pairing_direct(const RadialProfile& phi, const RadialProfile& psi) {
  require_compatible(phi, psi);
  const auto a = times_t(phi), b = times_t(psi);
  const auto da = derivative(a, phi.dt()), db = derivative(b, phi.dt());
  PairingResult r;
  for (std::size_t k = 0; k < a.size(); ++k) r.value += trapezoid_weight(k, a.size(), phi.dt()) * da[k] * b[k];
  r.value /= 16.0 * kPi * kPi;
  r.scale = pairing_scale(a, da, b, db, phi.dt());
  return r;
}

PairingResult E_pairing_4AM(const RadialProfile& phi, const RadialProfile& psi) {
  require_compatible(phi, psi);
  // <k_0(t), phi> = t phi~(t) / (4 pi) in dimension 3.
  auto a = times_t(phi), b = times_t(psi);
  for (auto& v : a) v /= 4.0 * kPi;
  for (auto& v : b) v /= 4.0 * kPi;
  const auto db = derivative(b, phi.dt());
  PairingResult r;
  for (std::size_t k = 0; k < a.size(); ++k) r.value -= trapezoid_weight(k, a.size(), phi.dt()) * a[k] * db[k];
  const auto a3 = times_t(phi), b3 = times_t(psi);
  r.scale = pairing_scale(a3, derivative(a3, phi.dt()), b3, derivative(b3, phi.dt()), phi.dt());
  return r;
}

HardyResult hardy_transform(const std::vector<double>& h, double dt, Diagnostics* diag) {
  if (!(dt > 0.0)) throw std::invalid_argument("hardy_transform: dt must be positive");
  if (h.size() < 2) throw std::invalid_argument("hardy_transform: need at least two samples");
  const std::size_t K = h.size() - 1;
  HardyResult res;
  res.H.assign(h.size(), 0.0);

  double peak = 0.0;
  for (double v : h) peak = std::max(peak, std::abs(v));
  if (peak == 0.0) return res;
  if (std::abs(h[K]) > 1e-8 * peak) warn(diag, "hardy_transform: h has a non-negligible tail at T; H is truncated");

  static const GaussRule rule = gauss_legendre(8);
  auto t = [dt](std::size_t k) { return dt * static_cast<double>(k); };
  for (std::size_t j = K; j-- > 1;) {
    const double beta = (h[j + 1] - h[j]) / dt;
    const double alpha = h[j] - beta * t(j);
    res.H[j] = res.H[j + 1] + alpha * std::log(t(j + 1) / t(j)) + beta * dt;
  }
  for (std::size_t j = 1; j < K; ++j) {
    const double beta = (h[j + 1] - h[j]) / dt;
    const double alpha = h[j] - beta * t(j);
    const double Hn = res.H[j + 1], tn = t(j + 1);
    res.integral_H2 += integrate_gl(
        [&](double r) {
          const double v = Hn + alpha * std::log(tn / r) + beta * (tn - r);
          return v * v;
        },
        t(j), tn, rule);
  }
  // First interval: H(t) = A - d t + c ln(dt / t), integrated exactly.
  const double c = h[0], d = (h[1] - h[0]) / dt;
  const double H1 = K >= 1 ? res.H[1] : 0.0;
  const double A = H1 + d * dt;
  res.integral_H2 += dt * (A * A + d * d * dt * dt / 3.0 + 2.0 * c * c - A * d * dt + 2.0 * A * c - d * c * dt / 2.0);
  res.H[0] = c != 0.0 ? std::numeric_limits<double>::infinity() : H1 + d * dt;

  for (std::size_t j = 0; j < K; ++j) res.integral_h2 += dt / 3.0 * (h[j] * h[j] + h[j] * h[j + 1] + h[j + 1] * h[j + 1]);
  res.ratio = res.integral_H2 / res.integral_h2;
  return res;
}

SpaceTimeField tail_operator_T(const SpaceTimeField& S, int n) {
  const KernelPolynomial p = p_polynomial(n);
  SpaceTimeField out(S.spec(), S.dt());
  const std::size_t count = S.size();
  if (p.degree() < 0) {
    for (std::size_t k = 0; k < count; ++k) out.push_back(ScalarField(S.spec(), Space::Position));
    return out;
  }
  for (std::size_t k = 0; k < count; ++k) {
    ScalarField acc(S.spec(), Space::Position);
    for (std::size_t j = k; j < count; ++j) {
      const double r = S.t(j);
      if (count - k < 2) continue;
      const double w = (j == k || j + 1 == count) ? 0.5 * S.dt() : S.dt();
      auto dst = acc.values();
      if (r == 0.0) {
        // S(r)/r is even in r: extrapolate a + b r^2 from the next two slices.
        if (count < 3) continue;
        const double c = w * p(0.0) / (3.0 * S.dt());
        const auto s1 = S.slice(1).values(), s2 = S.slice(2).values();
        for (std::size_t i = 0; i < dst.size(); ++i) dst[i] += c * (4.0 * s1[i] - 0.5 * s2[i]);
        continue;
      }
      const double c = w * p(S.t(k) / r) / r;
      const auto src = S.slice(j).values();
      for (std::size_t i = 0; i < dst.size(); ++i) dst[i] += c * src[i];
    }
    out.push_back(std::move(acc));
  }
  return out;
}

}  // namespace quadscat
