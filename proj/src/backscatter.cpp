#include "quadscat/backscatter.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <sstream>
#include <stdexcept>

#include "quadscat/fft.hpp"
#include "quadscat/kernels.hpp"
#include "quadscat/parallel.hpp"
#include "quadscat/spectral.hpp"

namespace quadscat {

double support_radius(const ScalarField& f) { return effective_radius(f, kSupportThreshold); }

namespace {

struct Supports {
  double rf = 0.0, rg = 0.0;
};

Supports resolve_supports(const ScalarField& f, const ScalarField& g, const PipelineConfig& config) {
  Supports s;
  s.rf = config.support_f ? *config.support_f : support_radius(f);
  s.rg = config.support_g ? *config.support_g : (&f == &g ? s.rf : support_radius(g));
  return s;
}

SphericalMeanOptions mean_options(const PipelineConfig& config, const Supports& s) {
  SphericalMeanOptions o;
  o.interpolation = config.interpolation;
  o.support_f = s.rf;
  o.support_g = s.rg;
  return o;
}

std::size_t slice_index(const GridSpec& spec, const Supports& s, const PipelineConfig& config) {
  if (config.K) return *config.K;
  const double reach = config.horizon_margin * (s.rf + s.rg);
  return std::max<std::size_t>(1, static_cast<std::size_t>(std::ceil(reach / spec.spacing() - 1e-9)));
}

double trapezoid_weight(std::size_t k, std::size_t K, double dt) { return (k == 0 || k == K) ? 0.5 * dt : dt; }

// Runs map(k, A_k) for k = 0 .. K in parallel batches and reduce(k, result)
// in increasing k, so the reduction order never depends on the worker count.
template <class Map, class Reduce>
void for_each_A_slice(const SphericalMeanEvaluator& S, std::size_t K, Map&& map, Reduce&& reduce) {
  using Result = decltype(map(std::size_t{0}, std::declval<ScalarField&>()));
  const double dt = S.spec().spacing();
  const double c3 = kappa0_main_coefficient(3);
  const std::size_t batch = std::max<std::size_t>(1, max_threads());
  for (std::size_t k0 = 0; k0 <= K; k0 += batch) {
    const std::size_t count = std::min(batch, K + 1 - k0);
    std::vector<std::optional<Result>> results(count);
    parallel_for(count, [&](std::size_t i) {
      const std::size_t k = k0 + i;
      ScalarField A = S.evaluate(static_cast<double>(k) * dt);
      A *= c3;
      results[i].emplace(map(k, A));
    });
    for (std::size_t i = 0; i < count; ++i) reduce(k0 + i, std::move(*results[i]));
  }
}

void truncation_check(const Supports& s, std::size_t K, double dt, Diagnostics* diag) {
  const double reach = static_cast<double>(K) * dt;
  if (reach < s.rf + s.rg) {
    std::ostringstream msg;
    msg << "B2: time horizon t_K = " << reach << " < r_f + r_g = " << s.rf + s.rg
        << "; S slices have not decayed, the t-integral is truncated";
    warn(diag, msg.str());
  }
}

ScalarField pointwise_product(const ScalarField& a, const ScalarField& b) {
  ScalarField out(a.spec(), Space::Position);
  for (std::size_t i = 0; i < a.size(); ++i) out[i] = a[i] * b[i];
  return out;
}

// Euler-Maclaurin data at t = 0.  With A = t E~(t) and E = cos(t|D|) E~:
//   E(0) = f g,   E''(0) = Lap(f g) + (Lap f g + f Lap g - 2 grad f . grad g)/3.
// Each expression is written so that swapping f and g reproduces it bit for bit.
struct EndpointData {
  ScalarField fg;
  ScalarField second;  ///< (Lap f g + f Lap g - 2 grad f . grad g)/3, without Lap(f g)
};

EndpointData endpoint_data(const ScalarField& f, const ScalarField& g) {
  EndpointData d{pointwise_product(f, g), ScalarField(f.spec(), Space::Position)};
  const ScalarField lf = laplacian(f);
  const ScalarField lg = &f == &g ? lf : laplacian(g);
  std::vector<ScalarField> df, dg;
  for (int axis = 0; axis < 3; ++axis) {
    df.push_back(partial_derivative(f, axis));
    dg.push_back(&f == &g ? df.back() : partial_derivative(g, axis));
  }
  for (std::size_t i = 0; i < f.size(); ++i) {
    const cplx grad = df[0][i] * dg[0][i] + df[1][i] * dg[1][i] + df[2][i] * dg[2][i];
    d.second[i] = (lf[i] * g[i] + f[i] * lg[i] - 2.0 * grad) / 3.0;
  }
  return d;
}

ScalarField cos_apply(const fft::Spectrum& s, double t) {
  return s.apply([t](double x, double y, double z) { return cplx(std::cos(t * std::sqrt(x * x + y * y + z * z)), 0.0); });
}

struct PipelineOutput {
  ScalarField b2;
  cplx route_ii{0.0, 0.0};
  std::size_t K = 0;
};

PipelineOutput run_pipeline(const ScalarField& f, const ScalarField& g, const ScalarField* h,
                            const SphereQuadrature& quad, const PipelineConfig& config, Diagnostics* diag) {
  require_space(f, Space::Position, "B2");
  require_space(g, Space::Position, "B2");
  require_same_grid(f, g, "B2");
  if (h != nullptr) require_same_grid(f, *h, "Q_form");

  const GridSpec& spec = f.spec();
  const double dt = spec.spacing();
  const Supports sup = resolve_supports(f, g, config);
  const std::size_t K = slice_index(spec, sup, config);
  SphericalMeanEvaluator S(f, g, quad, mean_options(config, sup));
  S.check_horizon(static_cast<double>(K) * dt, diag);
  truncation_check(sup, K, dt, diag);

  std::optional<fft::Spectrum> hs;
  if (h != nullptr) hs.emplace(*h);

  PipelineOutput out{ScalarField(spec, Space::Position), {0.0, 0.0}, K};
  struct SliceResult {
    std::optional<ScalarField> propagated;
    cplx pairing{0.0, 0.0};
  };
  for_each_A_slice(
      S, K,
      [&](std::size_t k, ScalarField& A) {
        SliceResult r;
        const double t = static_cast<double>(k) * dt;
        if (t == 0.0) return r;
        r.propagated.emplace(cos_apply(fft::Spectrum(A), t));
        if (hs) r.pairing = bilinear_pairing(A, cos_apply(*hs, t));
        return r;
      },
      [&](std::size_t k, SliceResult&& r) {
        const double w = trapezoid_weight(k, K, dt);
        if (r.propagated) {
          const auto src = r.propagated->values();
          auto dst = out.b2.values();
          for (std::size_t i = 0; i < dst.size(); ++i) dst[i] += w * src[i];
        }
        out.route_ii += w * r.pairing;
      });

  if (config.time_rule == TimeRule::EndpointCorrected) {
    const EndpointData d = endpoint_data(f, g);
    const ScalarField lap_fg = laplacian(d.fg);
    const double c2 = dt * dt / 12.0, c4 = dt * dt * dt * dt / 240.0;
    for (std::size_t i = 0; i < out.b2.size(); ++i) out.b2[i] += c2 * d.fg[i] - c4 * (lap_fg[i] + d.second[i]);
    if (h != nullptr) {
      const ScalarField lap_h = laplacian(*h);
      out.route_ii += c2 * bilinear_pairing(d.fg, *h) - c4 * (bilinear_pairing(d.fg, lap_h) + bilinear_pairing(d.second, *h));
    }
  }
  out.b2 *= -4.0;
  out.route_ii *= -4.0;
  return out;
}

}  // namespace

std::size_t resolve_slice_index(const ScalarField& f, const ScalarField& g, const PipelineConfig& config) {
  return slice_index(f.spec(), resolve_supports(f, g, config), config);
}

SpaceTimeField assemble_A(const SpaceTimeField& S, int n) {
  const int m = (n - 3) / 2;
  SpaceTimeField main = tail_operator_T(S, n);
  const double c = kappa0_main_coefficient(n);
  for (std::size_t k = 0; k < S.size(); ++k) {
    auto dst = main.slice(k).values();
    const auto src = S.slice(k).values();
    for (std::size_t i = 0; i < dst.size(); ++i) dst[i] += c * src[i];
  }
  for (int d = 0; d < m; ++d) {
    if (main.size() < 3) throw std::invalid_argument("assemble_A: need at least three slices to differentiate");
    SpaceTimeField next(S.spec(), S.dt());
    const std::size_t K = main.size() - 1;
    for (std::size_t k = 0; k <= K; ++k) {
      ScalarField s(S.spec(), Space::Position);
      const auto at = [&](std::size_t j) { return main.slice(j).values(); };
      for (std::size_t i = 0; i < s.size(); ++i) {
        if (k == 0) s[i] = (-3.0 * at(0)[i] + 4.0 * at(1)[i] - at(2)[i]) / (2.0 * S.dt());
        else if (k == K) s[i] = (3.0 * at(K)[i] - 4.0 * at(K - 1)[i] + at(K - 2)[i]) / (2.0 * S.dt());
        else s[i] = (at(k + 1)[i] - at(k - 1)[i]) / (2.0 * S.dt());
      }
      next.push_back(std::move(s));
    }
    main = std::move(next);
  }
  return main;
}

SpaceTimeField A_time_route(const ScalarField& f, const ScalarField& g, const SphereQuadrature& quad,
                            const PipelineConfig& config, Diagnostics* diag) {
  const Supports sup = resolve_supports(f, g, config);
  const std::size_t K = slice_index(f.spec(), sup, config);
  const SpaceTimeField S = spherical_mean_slices(f, g, f.spec().spacing(), K + 1, quad, mean_options(config, sup), diag);
  return assemble_A(S, 3);
}

cplx odd_spacetime_transform(const SpaceTimeField& u, const Vec3& xi, double tau) {
  // \int_R e^{-i t tau} u dt = -2i \int_0^inf sin(t tau) u dt for odd u.
  const std::size_t K = u.size() - 1;
  std::vector<cplx> phi(u.size());
  parallel_for(u.size(), [&](std::size_t k) {
    const double s = std::sin(tau * u.t(k));
    phi[k] = s == 0.0 ? cplx{0.0, 0.0} : s * SpectralSampler::transform_of(u.slice(k))(xi);
  });
  cplx acc{0.0, 0.0};
  for (std::size_t k = 0; k <= K; ++k) acc += trapezoid_weight(k, K, u.dt()) * phi[k];
  return cplx(0.0, -2.0) * acc;
}

std::vector<FourierCheckRow> A_fourier_check(const ScalarField& f, const ScalarField& g,
                                             const std::vector<FourierTestPoint>& points, const SphereQuadrature& quad,
                                             const PipelineConfig& config, Diagnostics* diag) {
  const GridSpec& spec = f.spec();
  const double band = kPi / spec.spacing();
  for (const auto& p : points) {
    if (std::abs(p.tau) > band) {
      throw std::invalid_argument("A_fourier_check: |tau| = " + std::to_string(std::abs(p.tau)) +
                                  " exceeds the resolvable band pi/h = " + std::to_string(band));
    }
    for (double x : p.xi)
      if (std::abs(x) > band) throw std::invalid_argument("A_fourier_check: xi outside the frequency box");
  }
  const SpaceTimeField A = A_time_route(f, g, quad, config, diag);
  const SpectralSampler F = SpectralSampler::transform_of(f);
  const SpectralSampler G = SpectralSampler::transform_of(g);
  const cplx factor = 1.0 / (cplx(0.0, 8.0) * (2.0 * kPi) * (2.0 * kPi));

  std::vector<FourierCheckRow> rows;
  for (const auto& p : points) {
    FourierCheckRow row;
    row.point = p;
    row.lhs = odd_spacetime_transform(A, p.xi, p.tau);
    const Vec3 half{0.5 * p.xi[0], 0.5 * p.xi[1], 0.5 * p.xi[2]};
    row.rhs = factor * bilinear_spherical_S_at(F, G, half, 0.5 * p.tau, quad);
    const double den = std::abs(row.rhs);
    row.rel_err = den > 0.0 ? std::abs(row.lhs - row.rhs) / den : std::abs(row.lhs);
    rows.push_back(row);
  }
  return rows;
}

ScalarField B2(const ScalarField& f, const ScalarField& g, const SphereQuadrature& quad, const PipelineConfig& config,
               Diagnostics* diag) {
  return run_pipeline(f, g, nullptr, quad, config, diag).b2;
}

QResult Q_form(const ScalarField& f, const ScalarField& g, const ScalarField& h, const SphereQuadrature& quad,
               const PipelineConfig& config, Diagnostics* diag) {
  const PipelineOutput out = run_pipeline(f, g, &h, quad, config, diag);
  QResult q;
  q.route_i = bilinear_pairing(h, out.b2);
  q.route_ii = out.route_ii;
  q.K = out.K;
  const double den = std::max(std::abs(q.route_i), std::abs(q.route_ii));
  q.rel_diff = den > 0.0 ? std::abs(q.route_i - q.route_ii) / den : 0.0;
  return q;
}

double support_check(double r_f, double r_g, const ScalarField& field, const Vec3& center) {
  const double radius = std::sqrt(r_f * r_f + r_g * r_g) + 3.0 * field.spec().spacing();
  return energy_fraction_outside(field, center, radius);
}

double support_check(const ScalarField& f, const ScalarField& g, const ScalarField& field) {
  return support_check(support_radius(f), support_radius(g), field);
}

double nonradial_fraction(const ScalarField& u) {
  require_space(u, Space::Position, "nonradial_fraction");
  const GridSpec& spec = u.spec();
  const long long n = static_cast<long long>(spec.points());
  const long long half = n / 2;
  // Nodes at equal integer |i|^2 + |j|^2 + |k|^2 sit at exactly the same radius.
  std::map<long long, std::pair<cplx, std::size_t>> shells;
  auto key = [&](std::size_t flat) {
    const long long k = static_cast<long long>(flat) % n - half;
    const long long j = (static_cast<long long>(flat) / n) % n - half;
    const long long i = static_cast<long long>(flat) / (n * n) - half;
    return i * i + j * j + k * k;
  };
  double total = 0.0;
  for (std::size_t p = 0; p < u.size(); ++p) {
    auto& s = shells[key(p)];
    s.first += u[p];
    s.second += 1;
    total += std::norm(u[p]);
  }
  if (total == 0.0) return 0.0;
  double off = 0.0;
  for (std::size_t p = 0; p < u.size(); ++p) {
    const auto& s = shells[key(p)];
    off += std::norm(u[p] - s.first / static_cast<double>(s.second));
  }
  return off / total;
}

}  // namespace quadscat
