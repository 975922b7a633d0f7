#include "quadscat/checks.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>

#include "quadscat/backscatter.hpp"
#include "quadscat/dyadic.hpp"
#include "quadscat/kernels.hpp"
#include "quadscat/normprobe.hpp"
#include "quadscat/radial.hpp"
#include "quadscat/spectral.hpp"
#include "quadscat/sphere.hpp"

namespace quadscat {

std::string to_string(Suite suite) {
  switch (suite) {
    case Suite::Identities: return "identities";
    case Suite::Kernels: return "kernels";
    case Suite::CrossChecks: return "crosschecks";
    case Suite::Structure: return "structure";
    case Suite::Probes: return "probes";
    case Suite::Dyadic: return "dyadic";
  }
  return "?";
}

const std::vector<Suite>& all_suites() {
  static const std::vector<Suite> suites{Suite::Identities, Suite::Kernels, Suite::CrossChecks,
                                         Suite::Structure,  Suite::Probes,  Suite::Dyadic};
  return suites;
}

Suite suite_from_string(const std::string& text) {
  for (Suite s : all_suites())
    if (to_string(s) == text) return s;
  throw std::invalid_argument("unknown suite '" + text +
                              "' (identities, kernels, crosschecks, structure, probes, dyadic)");
}

const std::map<std::string, double>& default_tolerances() {
  static const std::map<std::string, double> tol{
      // grid
      {"grid.roundtrip", 1e-12},
      {"grid.parseval", 1e-12},
      {"grid.gaussian_transform", 1e-10},
      {"grid.zero_transform", 0.0},
      {"grid.translate_identity", 1e-12},
      {"grid.translate_isometry", 1e-12},
      {"grid.translate_roll", 1e-12},
      {"grid.gaussian_peak", 1e-15},
      {"grid.gaussian_norm", 1e-8},
      {"grid.gaussian_shift_node", 1e-12},
      // spectral
      {"spectral.zero_exponents", 1e-14},
      {"spectral.bessel_inverse", 1e-12},
      {"spectral.weight_inverse", 1e-12},
      {"spectral.homogeneity", 1e-12},
      {"spectral.energy_split", 1e-12},
      {"spectral.propagator_t0", 0.0},
      {"spectral.addition_formula", 1e-12},
      {"spectral.propagator_translate", 1e-12},
      {"spectral.K_initial", 0.0},
      {"spectral.K_norm_bound", 1e-12},
      {"spectral.commutator_trivial", 1e-12},
      // sphere
      {"sphere.weight_sum", 1e-12},
      {"sphere.antipodal", 0.0},
      {"sphere.exactness", 1e-12},
      {"sphere.offgrid_nodes", 1e-13},
      {"sphere.offgrid_linear", 1e-12},
      {"sphere.S_t0", 0.0},
      {"sphere.S_symmetry", 0.0},
      {"sphere.S_bilinear", 1e-12},
      {"sphere.S_closed_form", 1e-6},
      {"sphere.pairing_odd", 1e-12},
      {"sphere.rotation_covariance", 1e-10},
      {"sphere.cap_full", 1e-12},
      {"sphere.cap_empty", 0.0},
      {"sphere.cap_monotone", 0.0},
      // kernels
      {"kernels.p3_zero", 0.0},
      {"kernels.T3_zero", 0.0},
      {"kernels.hardy_zero", 0.0},
      {"kernels.k0_t0", 0.0},
      {"kernels.k0_linear", 1e-12},
      {"kernels.E_zero", 0.0},
      {"kernels.kappa0_t0", 0.0},
      {"kernels.p_oracle", 0.0},
      {"kernels.p_parity", 0.0},
      {"kernels.hardy_E1", 1e-3},
      {"kernels.hardy_bound", 4.0},
      {"kernels.E_routes", 1e-3},
      {"kernels.E_antisymmetry", 1e-6},
      {"kernels.E_diagonal", 1e-6},
      {"kernels.k0_routes", 1e-2},
      {"kernels.kappa0_n5", 1e-4},
      {"kernels.T_n5", 1e-4},
      // backscatter
      {"backscatter.A_t0", 0.0},
      {"backscatter.A_symmetry", 0.0},
      {"backscatter.Q_routes", 1e-10},
      {"backscatter.Q_symmetry", 1e-12},
      {"backscatter.A_closed_form", 1e-4},
      {"backscatter.fourier_agreement", 0.03},
      {"backscatter.fourier_refinement", 1.0},
      {"backscatter.fourier_conjugate", 1e-10},
      {"backscatter.fourier_tau0", 0.0},
      {"backscatter.Q_refinement", 0.02},
      {"backscatter.Q_routes_refined", 1e-10},
      {"backscatter.B2_symmetry", 1e-12},
      {"backscatter.B2_translation", 1e-3},
      {"backscatter.B2_support", 1e-3},
      {"backscatter.B2_radial", 1e-3},
      {"backscatter.B2_bilinear", 1e-12},
      {"backscatter.B2_scaling", 1e-12},
      // probes
      {"sphere.cap_slope", 0.3},
      {"radial.shell_band", 10.0},
      {"spectral.commutator_growth", 0.3},
      {"normprobe.translate_slope", 0.3},
      {"normprobe.modulate_slope", 0.3},
      // dyadic
      {"dyadic.telescoping", 1e-14},
      {"dyadic.annular_support", 0.0},
      {"dyadic.small_support", 0.0},
      {"dyadic.norm_band", 100.0},
      {"radial.dyadic_cross_decay", 100.0},
  };
  return tol;
}

void validate(const CheckConfig& config) {
  if (config.N < 16 || config.N % 2 != 0) {
    throw std::invalid_argument("grid points per axis must be even and at least 16 (got " +
                                std::to_string(config.N) + ")");
  }
  if (!(config.L > 0.0) || !std::isfinite(config.L)) throw std::invalid_argument("box half-width must be positive");
  if (config.K < 2) throw std::invalid_argument("need at least two time steps");
  if (config.sphere_degree < 1) throw std::invalid_argument("sphere degree must be positive");
  for (const auto& [name, value] : config.tolerances) {
    if (!default_tolerances().contains(name)) throw std::invalid_argument("unknown check '" + name + "'");
    if (!(value >= 0.0)) throw std::invalid_argument("tolerance for '" + name + "' must be nonnegative");
  }
}

bool all_pass(const std::vector<Check>& checks) {
  return std::all_of(checks.begin(), checks.end(), [](const Check& c) { return c.pass; });
}

namespace {

class Recorder {
 public:
  explicit Recorder(const CheckConfig& config) : config_(config) {}

  void add(const std::string& name, double measured, std::string note = {}) {
    const auto it = default_tolerances().find(name);
    if (it == default_tolerances().end()) throw std::logic_error("unregistered check " + name);
    const auto o = config_.tolerances.find(name);
    const double tol = o == config_.tolerances.end() ? it->second : o->second;
    checks_.push_back({name, measured, tol, std::isfinite(measured) && measured <= tol, std::move(note)});
  }

  std::vector<Check> take() { return std::move(checks_); }

 private:
  const CheckConfig& config_;
  std::vector<Check> checks_;
};

SphereQuadrature load_quadrature(const CheckConfig& c) {
  if (c.sphere_file.empty()) return SphereQuadrature::product_gauss(c.sphere_degree);
  return SphereQuadrature::from_file(c.sphere_file, c.sphere_degree);
}

ScalarField noise_field(const GridSpec& spec, std::mt19937_64& rng) {
  std::normal_distribution<double> normal;
  ScalarField u(spec, Space::Position);
  for (auto& v : u.values()) v = {normal(rng), normal(rng)};
  return u;
}

// Sum of a few Gaussians with random centers, widths and complex amplitudes.
ScalarField random_bumps(const GridSpec& spec, std::mt19937_64& rng, int count, double spread) {
  std::uniform_real_distribution<double> pos(-spread, spread), width(0.6, 1.5);
  std::normal_distribution<double> normal;
  ScalarField out(spec, Space::Position);
  for (int b = 0; b < count; ++b) {
    GaussianParams p;
    p.center = {pos(rng), pos(rng), pos(rng)};
    p.width = width(rng);
    p.amplitude = {normal(rng), normal(rng)};
    out += sample_gaussian(spec, p);
  }
  return out;
}

double rel_max_diff(const ScalarField& a, const ScalarField& b) {
  const double scale = std::max(max_abs(a), max_abs(b));
  return scale > 0.0 ? max_abs_diff(a, b) / scale : 0.0;
}

// Index roll by one node along the first axis: out(x) = f(x - h e_1).
ScalarField roll_first_axis(const ScalarField& f) {
  const GridSpec& s = f.spec();
  const std::size_t n = s.points();
  ScalarField out(s, f.space());
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      for (std::size_t k = 0; k < n; ++k) out[s.index(i, j, k)] = f.at((i + n - 1) % n, j, k);
  return out;
}

// \int_{S^2} x^a y^b z^c dw.
double sphere_monomial(int a, int b, int c) {
  if (a % 2 || b % 2 || c % 2) return 0.0;
  const double x = 0.5 * (a + 1), y = 0.5 * (b + 1), z = 0.5 * (c + 1);
  return 2.0 * std::exp(std::lgamma(x) + std::lgamma(y) + std::lgamma(z) - std::lgamma(x + y + z));
}

// Leibniz-rule oracle for p: (-d/ds)^{m+1} [(1-s)^m (1+s)^m] / (m! 4^{m+1}).
std::vector<Rational> p_oracle(int n) {
  const int m = (n - 3) / 2;
  auto binom = [](int a, int b) {
    std::int64_t r = 1;
    for (int i = 1; i <= b; ++i) r = r * (a - b + i) / i;
    return r;
  };
  auto derive = [](std::vector<Rational> p, int times) {
    for (int t = 0; t < times; ++t) {
      if (p.empty()) break;
      std::vector<Rational> d;
      for (std::size_t i = 1; i < p.size(); ++i) d.push_back(p[i] * Rational(static_cast<std::int64_t>(i)));
      p = std::move(d);
    }
    return p;
  };
  std::vector<Rational> u(m + 1), v(m + 1);
  for (int i = 0; i <= m; ++i) {
    u[i] = Rational(binom(m, i) * (i % 2 ? -1 : 1));
    v[i] = Rational(binom(m, i));
  }
  std::vector<Rational> total(std::max(2 * m, 1), Rational(0));
  for (int i = 0; i <= m + 1; ++i) {
    const auto du = derive(u, i), dv = derive(v, m + 1 - i);
    for (std::size_t a = 0; a < du.size(); ++a)
      for (std::size_t b = 0; b < dv.size(); ++b) total[a + b] += Rational(binom(m + 1, i)) * du[a] * dv[b];
  }
  std::int64_t denom = 1;
  for (int i = 2; i <= m; ++i) denom *= i;
  for (int i = 0; i <= m; ++i) denom *= 4;
  const Rational sign((m + 1) % 2 ? -1 : 1);
  for (auto& c : total) c = c * sign / Rational(denom);
  while (!total.empty() && total.back() == Rational(0)) total.pop_back();
  return total;
}

// ---------------------------------------------------------------- identities

void identity_checks(Recorder& r, const CheckConfig& c, const SphereQuadrature& quad, Diagnostics* diag) {
  const GridSpec spec(c.N, c.L);
  const double h = spec.spacing();
  std::mt19937_64 rng(c.seed);
  const ScalarField u = noise_field(spec, rng);

  const ScalarField U = forward_transform(u);
  r.add("grid.roundtrip", relative_l2_diff(inverse_transform(U), u));
  {
    const double lhs = std::pow(l2_norm(U), 2) / std::pow(2.0 * kPi, 3);
    const double rhs = std::pow(l2_norm(u), 2);
    r.add("grid.parseval", std::abs(lhs - rhs) / rhs);
  }
  {
    const GridSpec g(64, 10.0);
    GaussianParams p;
    const ScalarField F = forward_transform(sample_gaussian(g, p));
    double worst = 0.0;
    for (std::size_t i = 0; i < g.points(); ++i)
      for (std::size_t j = 0; j < g.points(); ++j)
        for (std::size_t k = 0; k < g.points(); ++k) {
          const double x2 = g.freq(i) * g.freq(i) + g.freq(j) * g.freq(j) + g.freq(k) * g.freq(k);
          if (x2 > 16.0) continue;
          const double exact = std::pow(2.0 * kPi, 1.5) * std::exp(-0.5 * x2);
          worst = std::max(worst, std::abs(F.at(i, j, k) - exact) / exact);
        }
    r.add("grid.gaussian_transform", worst, "exp(-|x|^2/2) on N=64, L=10, |xi| <= 4");
  }
  {
    const ScalarField zero(spec, Space::Position);
    r.add("grid.zero_transform", max_abs(forward_transform(zero)) + max_abs(inverse_transform(forward_transform(zero))));
  }
  r.add("grid.translate_identity", relative_l2_diff(translate(u, {0.0, 0.0, 0.0}), u));
  {
    const ScalarField t = translate(u, {0.37 * h, -1.3 * h, 2.9 * h});
    r.add("grid.translate_isometry", std::abs(l2_norm(t) - l2_norm(u)) / l2_norm(u));
  }
  r.add("grid.translate_roll", relative_l2_diff(translate(u, {h, 0.0, 0.0}), roll_first_axis(u)));
  {
    const ScalarField g = sample_gaussian(spec, GaussianParams{});
    r.add("grid.gaussian_peak", std::abs(g[spec.origin_index()] - 1.0) + std::abs(max_abs(g) - 1.0));
    GaussianParams p;
    p.amplitude = 1.5;
    const double norm2 = std::pow(l2_norm(sample_gaussian(spec, p)), 2);
    const double exact = 2.25 * std::pow(kPi, 1.5);
    r.add("grid.gaussian_norm", std::abs(norm2 - exact) / exact);
    GaussianParams q;
    q.center = {h, 0.0, 0.0};
    r.add("grid.gaussian_shift_node", max_abs_diff(sample_gaussian(spec, q, diag), roll_first_axis(g)));
  }

  // spectral
  const ScalarField f = random_bumps(spec, rng, 3, 2.0);
  {
    double d = max_abs_diff(bessel_multiplier(f, 0.0), f) + max_abs_diff(spatial_weight(f, 0.0), f);
    d += std::abs(sobolev_norm(f, {0.0, 0.0}) - l2_norm(f)) / l2_norm(f);
    r.add("spectral.zero_exponents", d);
  }
  r.add("spectral.bessel_inverse", relative_l2_diff(bessel_multiplier(bessel_multiplier(u, 1.5), -1.5), u));
  r.add("spectral.weight_inverse", relative_l2_diff(spatial_weight(spatial_weight(u, 1.5), -1.5), u));
  {
    const cplx k{-2.5, 1.25};
    const double lhs = sobolev_norm(k * f, {1.0, 1.0});
    const double rhs = std::abs(k) * sobolev_norm(f, {1.0, 1.0});
    r.add("spectral.homogeneity", std::abs(lhs - rhs) / rhs);
  }
  {
    const double t = 1.7;
    const double e = std::pow(l2_norm(cosine_propagator(u, t)), 2) +
                     std::pow(l2_norm(abs_derivative(sine_propagator(u, t))), 2);
    const double n2 = std::pow(l2_norm(u), 2);
    r.add("spectral.energy_split", std::abs(e - n2) / n2);
  }
  r.add("spectral.propagator_t0", max_abs_diff(cosine_propagator(f, 0.0), f) + max_abs(sine_propagator(f, 0.0)));
  {
    const double t = 1.3, s = 0.45;
    const auto ct = cosine_symbol(spec, t), cs = cosine_symbol(spec, s), st = sine_symbol(spec, t),
               ss = sine_symbol(spec, s), sum = cosine_symbol(spec, t + s);
    double worst = 0.0;
    for (std::size_t i = 0; i < sum.size(); ++i) worst = std::max(worst, std::abs(ct[i] * cs[i] - st[i] * ss[i] - sum[i]));
    r.add("spectral.addition_formula", worst);
  }
  {
    const Vec3 v{0.8, -0.35, 1.1};
    const double t = 2.2;
    const double d = std::max(rel_max_diff(cosine_propagator(translate(f, v), t), translate(cosine_propagator(f, t), v)),
                              rel_max_diff(sine_propagator(translate(f, v), t), translate(sine_propagator(f, t), v)));
    r.add("spectral.propagator_translate", d);
  }
  {
    const SpaceTimeField K = apply_K(f, h, 6);
    r.add("spectral.K_initial", max_abs_diff(K.slice(0), f));
    double excess = 0.0;
    for (const auto& s : K.slices()) excess = std::max(excess, l2_norm(s) - l2_norm(f));
    r.add("spectral.K_norm_bound", excess / l2_norm(f));
  }
  {
    CommutatorProbeOptions o;
    o.grid_points = 16;
    o.trials = 2;
    o.iterations = 4;
    o.seed = c.seed;
    const double d = std::abs(commutator_growth_probe(1.0, 0.0, o).estimate - 1.0) +
                     std::abs(commutator_growth_probe(0.0, 3.0, o).estimate - 1.0);
    r.add("spectral.commutator_trivial", d);
  }

  // sphere
  {
    double sum = 0.0;
    for (double w : quad.weights()) sum += w;
    r.add("sphere.weight_sum", std::abs(sum - 4.0 * kPi) / (4.0 * kPi));
    double anti = 0.0;
    const std::size_t P = quad.pairs();
    for (std::size_t i = 0; i < P; ++i) {
      for (int a = 0; a < 3; ++a) anti = std::max(anti, std::abs(quad.nodes()[i][a] + quad.nodes()[i + P][a]));
      anti = std::max(anti, std::abs(quad.weights()[i] - quad.weights()[i + P]));
    }
    r.add("sphere.antipodal", anti);
    double worst = 0.0;
    const int d = quad.degree();
    for (int a = 0; a <= d; ++a)
      for (int b = 0; a + b <= d; ++b)
        for (int e = 0; a + b + e <= d; ++e) {
          double acc = 0.0;
          for (std::size_t i = 0; i < quad.size(); ++i) {
            const Vec3& w = quad.nodes()[i];
            acc += quad.weights()[i] * std::pow(w[0], a) * std::pow(w[1], b) * std::pow(w[2], e);
          }
          worst = std::max(worst, std::abs(acc - sphere_monomial(a, b, e)));
        }
    r.add("sphere.exactness", worst, "all monomials up to degree " + std::to_string(d));
  }
  {
    std::vector<Vec3> pts;
    std::vector<cplx> expect;
    std::uniform_int_distribution<std::size_t> idx(0, spec.size() - 1);
    for (int p = 0; p < 200; ++p) {
      const std::size_t m = idx(rng);
      pts.push_back(spec.node(m));
      expect.push_back(u[m]);
    }
    const auto got = sample_offgrid(u, pts);
    double worst = 0.0;
    for (std::size_t p = 0; p < pts.size(); ++p) worst = std::max(worst, std::abs(got[p] - expect[p]));
    r.add("sphere.offgrid_nodes", worst);
  }
  {
    const auto lin = [](const Vec3& x) { return cplx(0.7 * x[0] - 1.3 * x[1] + 0.4 * x[2], 0.0); };
    const ScalarField g = sample_function(spec, lin);
    std::uniform_real_distribution<double> in(-c.L, c.L - h);
    std::vector<Vec3> pts(500);
    for (auto& p : pts) p = {in(rng), in(rng), in(rng)};
    const auto got = sample_offgrid(g, pts);
    double worst = 0.0;
    for (std::size_t p = 0; p < pts.size(); ++p) worst = std::max(worst, std::abs(got[p] - lin(pts[p])));
    r.add("sphere.offgrid_linear", worst / max_abs(g));
  }
  GaussianParams pf, pg;
  pf.center = {0.5, -0.25, 0.3};
  pf.width = 1.0;
  pg.center = {-0.4, 0.6, -0.2};
  pg.width = 0.8;
  pg.modulation = {0.3, 0.0, -0.5};
  const ScalarField F = sample_gaussian(spec, pf, diag), G = sample_gaussian(spec, pg, diag);
  {
    const double t = 1.5;
    r.add("sphere.S_t0", max_abs(bilinear_spherical_S(F, G, 0.0, quad, {}, diag)));
    const ScalarField sfg = bilinear_spherical_S(F, G, t, quad, {}, diag);
    r.add("sphere.S_symmetry", max_abs_diff(sfg, bilinear_spherical_S(G, F, t, quad, {}, diag)));
    const cplx alpha{0.6, -1.1};
    const ScalarField F2 = sample_gaussian(spec, pg, diag);
    const ScalarField lhs = bilinear_spherical_S(alpha * F + F2, G, t, quad, {}, diag);
    const ScalarField rhs = alpha * sfg + bilinear_spherical_S(F2, G, t, quad, {}, diag);
    r.add("sphere.S_bilinear", rel_max_diff(lhs, rhs));

    // f(tw) f(-tw) = e^{-2 t^2} for the unit Gaussian e^{-|x|^2}.
    GaussianParams unit;
    unit.width = std::sqrt(0.5);
    // h = 0.5 aliases this width at the 1e-5 level, so resolve it first.
    const GridSpec fine(64, 8.0);
    const ScalarField e = sample_gaussian(fine, unit, diag);
    double worst = 0.0;
    for (double tt : {0.5, 1.0, 1.5}) {
      const cplx v = bilinear_spherical_S_at(e, e, {0.0, 0.0, 0.0}, tt, quad);
      const double exact = tt * 4.0 * kPi * std::exp(-2.0 * tt * tt);
      worst = std::max(worst, std::abs(v - exact) / exact);
    }
    r.add("sphere.S_closed_form", worst, "unit Gaussian at the origin on N=64, L=8, t = 0.5, 1, 1.5");

    const ScalarField odd =
        sample_function(spec, [](const Vec3& x) { return cplx(x[0] * std::exp(-0.5 * (x[0] * x[0] + x[1] * x[1] + x[2] * x[2])), 0.0); });
    r.add("sphere.pairing_odd", std::abs(spherical_pairing(odd, 1.3, quad)));

    // Quarter turn about the z axis: permutes both the grid and the node set.
    const std::size_t n = spec.points();
    auto rotated = [&](const ScalarField& a) {
      ScalarField out(spec, Space::Position);
      for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
          for (std::size_t k = 0; k < n; ++k) out[spec.index(i, j, k)] = a.at((n - j) % n, i, k);
      return out;
    };
    const ScalarField lhs_r = bilinear_spherical_S(rotated(F), rotated(G), t, quad, {}, diag);
    r.add("sphere.rotation_covariance", rel_max_diff(lhs_r, rotated(sfg)), "quarter turn about z");
  }
  {
    const auto full = cap_measure_mc({0.0, 0.0, 0.0}, 1.0, 1.0, 3.0, 20000, c.seed);
    r.add("sphere.cap_full", std::abs(full.measure - 4.0 * kPi) / (4.0 * kPi));
    r.add("sphere.cap_empty", cap_measure_mc({1.0, 0.0, 0.0}, 1.0, 1.0, 1e-9, 20000, c.seed).measure);
    double drop = 0.0, prev = 0.0;
    for (double s = 0.05; s <= 2.5; s += 0.05) {
      const double m = cap_measure_mc({1.0, 0.0, 0.0}, 1.0, 1.0, s, 20000, c.seed).measure;
      drop = std::max(drop, prev - m);
      prev = m;
    }
    r.add("sphere.cap_monotone", drop);
  }

  // kernels
  r.add("kernels.p3_zero", static_cast<double>(p_polynomial(3).degree() + 1));
  {
    SpaceTimeField S(GridSpec(16, 4.0), 0.25);
    for (int k = 0; k < 5; ++k) S.push_back(noise_field(S.spec(), rng));
    double worst = 0.0;
    for (const auto& s : tail_operator_T(S, 3).slices()) worst = std::max(worst, max_abs(s));
    r.add("kernels.T3_zero", worst);
  }
  {
    const HardyResult z = hardy_transform(std::vector<double>(50, 0.0), 0.1);
    double worst = z.ratio;
    for (double v : z.H) worst = std::max(worst, std::abs(v));
    r.add("kernels.hardy_zero", worst);
  }
  {
    const ScalarField phi = sample_gaussian(spec, GaussianParams{}, diag);
    r.add("kernels.k0_t0", std::abs(k0_pairing_multiplier(phi, 0.0)));
    const cplx one = k0_pairing_multiplier(phi, 0.9);
    const cplx two = k0_pairing_multiplier(2.0 * phi, 0.9);
    r.add("kernels.k0_linear", std::abs(two - 2.0 * one) / std::abs(one));
    const RadialProfile prof = profile_from_field(phi, h, 2 * static_cast<std::size_t>(c.L / h / 2), quad);
    r.add("kernels.kappa0_t0", std::abs(kappa0_pairing(prof, 0.0, 3, diag)));
    const RadialProfile zero = RadialProfile::sample([](double) { return cplx(0.0); }, 0.01, 100);
    const RadialProfile psi = RadialProfile::sample([](double t) { return cplx(std::exp(-t * t)); }, 0.01, 100);
    r.add("kernels.E_zero", std::abs(E_pairing_direct(zero, psi).value) + std::abs(E_pairing_4AM(zero, psi).value));
  }

  // backscatter
  {
    PipelineConfig pc;
    pc.K = c.K;
    const SpaceTimeField A = A_time_route(F, G, quad, pc, diag);
    const SpaceTimeField B = A_time_route(G, F, quad, pc, diag);
    r.add("backscatter.A_t0", max_abs(A.slice(0)));
    double d = 0.0;
    for (std::size_t k = 0; k < A.size(); ++k) d = std::max(d, max_abs_diff(A.slice(k), B.slice(k)));
    r.add("backscatter.A_symmetry", d);

    GaussianParams ph;
    ph.center = {0.2, 0.1, -0.3};
    ph.width = 1.2;
    const ScalarField H = sample_gaussian(spec, ph, diag);
    const QResult q1 = Q_form(F, G, H, quad, pc, diag);
    const QResult q2 = Q_form(G, F, H, quad, pc, diag);
    r.add("backscatter.Q_routes", std::max(q1.rel_diff, q2.rel_diff));
    r.add("backscatter.Q_symmetry", std::abs(q1.route_i - q2.route_i) / std::abs(q1.route_i));
  }
}

// ------------------------------------------------------------------- kernels

void kernel_checks(Recorder& r, const CheckConfig& c, const SphereQuadrature& quad, Diagnostics* diag) {
  {
    int bad = 0, parity = 0;
    std::string note;
    for (int n : {3, 5, 7, 9}) {
      const KernelPolynomial p = p_polynomial(n);
      if (p.coeffs != p_oracle(n)) ++bad;
      note += (note.empty() ? "" : "; ") + ("n=" + std::to_string(n) + ": " + p.to_string());
      const int m = (n - 3) / 2;
      if (p.degree() > m - 1) ++parity;
      for (std::size_t k = 0; k < p.coeffs.size(); ++k) {
        const bool odd_power = k % 2 == 1;
        if (p.coeffs[k] != Rational(0) && odd_power != (m % 2 == 0)) ++parity;
      }
    }
    r.add("kernels.p_oracle", bad, note);
    r.add("kernels.p_parity", parity);
  }
  {
    const double dt = 0.002;
    std::vector<double> h;
    for (double t = 0.0; t <= 40.0 + 1e-12; t += dt) h.push_back(std::exp(-t));
    const HardyResult res = hardy_transform(h, dt, diag);
    r.add("kernels.hardy_E1", std::abs(res.integral_H2 - 2.0 * std::log(2.0)), "h = e^{-t}: \\int H^2 = 2 ln 2");
  }
  {
    std::mt19937_64 rng(c.seed + 11);
    std::uniform_real_distribution<double> mu(0.0, 5.0), sd(0.2, 1.5), amp(0.1, 2.0);
    std::uniform_int_distribution<int> bumps(1, 4);
    const double dt = 0.005;
    double worst = 0.0;
    for (int member = 0; member < 20; ++member) {
      const int nb = bumps(rng);
      std::vector<double> cm(nb), cs(nb), ca(nb);
      for (int b = 0; b < nb; ++b) {
        cm[b] = mu(rng);
        cs[b] = sd(rng);
        ca[b] = amp(rng);
      }
      std::vector<double> h;
      for (double t = 0.0; t <= 20.0 + 1e-12; t += dt) {
        double v = 0.0;
        for (int b = 0; b < nb; ++b) v += ca[b] * std::exp(-0.5 * std::pow((t - cm[b]) / cs[b], 2));
        h.push_back(v);
      }
      worst = std::max(worst, hardy_transform(h, dt, diag).ratio);
    }
    r.add("kernels.hardy_bound", worst, "largest ratio over 20 random smooth h");
  }
  {
    const double dt = 0.002;
    const std::size_t count = 5001;
    const auto phi = RadialProfile::sample([](double t) { return cplx(4.0 * kPi * std::exp(-0.5 * t * t)); }, dt, count);
    const auto psi = RadialProfile::sample(
        [](double t) { return cplx(4.0 * kPi * std::exp(-t * t / 0.98) * (1.0 + 0.3 * t * t)); }, dt, count);
    const PairingResult d = E_pairing_direct(phi, psi), a = E_pairing_4AM(phi, psi);
    r.add("kernels.E_routes", std::abs(d.value - a.value) / std::abs(d.value));
    const PairingResult ds = E_pairing_direct(psi, phi), as = E_pairing_4AM(psi, phi);
    r.add("kernels.E_antisymmetry",
          std::max(std::abs(d.value + ds.value) / d.scale, std::abs(a.value + as.value) / a.scale));
    const PairingResult dd = E_pairing_direct(phi, phi), ad = E_pairing_4AM(phi, phi);
    r.add("kernels.E_diagonal", std::max(std::abs(dd.value) / dd.scale, std::abs(ad.value) / ad.scale));
  }
  {
    const GridSpec spec(c.N, c.L);
    const double h = spec.spacing();
    GaussianParams p;
    p.width = 0.7;
    const ScalarField phi = sample_gaussian(spec, p, diag);
    const RadialProfile prof = profile_from_field(phi, 0.25 * h, static_cast<std::size_t>(0.9 * c.L / (0.25 * h)), quad);
    double worst = 0.0;
    for (double t = 0.2; t <= 1.5 + 1e-12; t += 0.1) {
      const cplx a = k0_pairing_multiplier(phi, t), b = kappa0_pairing(prof, t, 3, diag);
      worst = std::max(worst, std::abs(a - b) / std::abs(a));
    }
    r.add("kernels.k0_routes", worst, "t in [0.2, 1.5]");
  }
  {
    // n = 5: p = -1/(8 pi^2), m = 1, phi~ = 4 pi e^{-r^2/2}; the tail integrates in closed form.
    const double dt = 0.01;
    const auto prof = RadialProfile::sample([](double t) { return cplx(4.0 * kPi * std::exp(-0.5 * t * t)); }, dt, 1201);
    const double p0 = p_polynomial(5)(0.0);
    const double scale = 4.0 * kPi * std::abs(p0);
    double worst = 0.0;
    for (double t : {0.0, 0.5, 1.0, 1.5, 2.5}) {
      const double exact = kappa0_main_coefficient(5) * t * t * 4.0 * kPi * std::exp(-0.5 * t * t) +
                           p0 * 4.0 * kPi * std::exp(-0.5 * t * t);
      worst = std::max(worst, std::abs(kappa0_pairing(prof, t, 5, diag) - exact) / scale);
    }
    r.add("kernels.kappa0_n5", worst, "relative to 4 pi |p(0)|; the pairing vanishes at t = 1");
  }
  {
    // Synthetic slices S(x, t) = c(x) t e^{-t^2}; for n = 5, T = p0 (sqrt(pi)/2) erfc(t) c(x).
    const GridSpec g(16, 4.0);
    std::mt19937_64 rng(c.seed + 5);
    const ScalarField shape = noise_field(g, rng);
    const double dt = 0.01;
    SpaceTimeField S(g, dt);
    for (std::size_t k = 0; k <= 800; ++k) {
      const double t = dt * static_cast<double>(k);
      S.push_back(cplx(t * std::exp(-t * t)) * shape);
    }
    const SpaceTimeField T = tail_operator_T(S, 5);
    const double p0 = p_polynomial(5)(0.0);
    const double peak = std::abs(p0) * 0.5 * std::sqrt(kPi) * max_abs(shape);
    double worst = 0.0;
    for (std::size_t k = 0; k < T.size(); ++k) {
      const double factor = p0 * 0.5 * std::sqrt(kPi) * std::erfc(T.t(k));
      worst = std::max(worst, max_abs_diff(T.slice(k), cplx(factor) * shape) / peak);
    }
    r.add("kernels.T_n5", worst);
  }
}

// ---------------------------------------------------------------- crosscheck

void cross_checks(Recorder& r, const CheckConfig& c, const SphereQuadrature& quad, Diagnostics* diag) {
  {
    // Width 1/sqrt(2) needs h <= 0.375 to stay below 1e-8 aliasing.
    const GridSpec spec(std::max<std::size_t>(c.N, 64), c.L);
    GaussianParams unit;
    unit.width = std::sqrt(0.5);
    const ScalarField f = sample_gaussian(spec, unit, diag);
    PipelineConfig pc;
    pc.K = static_cast<std::size_t>(std::ceil(2.0 / spec.spacing()));
    const SpaceTimeField A = A_time_route(f, f, quad, pc, diag);
    double worst = 0.0;
    for (std::size_t k = 1; k < A.size(); ++k) {
      const double t = A.t(k);
      if (t > 2.0) break;
      const double exact = t * std::exp(-2.0 * t * t);
      worst = std::max(worst, std::abs(A.slice(k)[spec.origin_index()] - exact) / exact);
    }
    r.add("backscatter.A_closed_form", worst, "A(f, f)(0, t) = t e^{-2t^2}, 0 < t <= 2, N >= 64");
  }
  {
    const std::vector<FourierTestPoint> points{
        {{0.0, 0.0, 0.0}, 1.0}, {{0.5, 0.0, 0.0}, 1.0}, {{0.3, 0.4, -0.2}, 0.6}, {{-0.3, -0.4, 0.2}, -0.6},
        {{0.0, 0.0, 0.0}, 0.0}};
    std::vector<double> err;
    double conj = 0.0, zero = 0.0;
    for (std::size_t N : {32, 64}) {
      const GridSpec spec(N, 12.0);
      GaussianParams p;
      p.width = std::sqrt(0.5);
      p.center = {0.2, 0.0, -0.1};
      GaussianParams q;
      q.width = 0.8;
      const ScalarField f = sample_gaussian(spec, p, diag), g = sample_gaussian(spec, q, diag);
      const auto rows = A_fourier_check(f, g, points, quad, {}, diag);
      double worst = 0.0;
      for (std::size_t i = 0; i < 4; ++i) worst = std::max(worst, rows[i].rel_err);
      err.push_back(worst);
      conj = std::max(conj, std::abs(rows[3].lhs - std::conj(rows[2].lhs)) / std::abs(rows[2].lhs));
      conj = std::max(conj, std::abs(rows[3].rhs - std::conj(rows[2].rhs)) / std::abs(rows[2].rhs));
      zero = std::max(zero, std::abs(rows[4].lhs) + std::abs(rows[4].rhs));
    }
    r.add("backscatter.fourier_agreement", err[1], "N = 64; N = 32 gives " + std::to_string(err[0]));
    r.add("backscatter.fourier_refinement", err[1] / err[0], "error ratio N=64 / N=32");
    r.add("backscatter.fourier_conjugate", conj);
    r.add("backscatter.fourier_tau0", zero);
  }
  {
    std::vector<cplx> values;
    double routes = 0.0;
    for (std::size_t N : {48, 96}) {
      const GridSpec spec(N, 12.0);
      const ScalarField f = sample_gaussian(spec, GaussianParams{}, diag);
      const QResult q = Q_form(f, f, f, quad, {}, diag);
      values.push_back(q.route_i);
      routes = std::max(routes, q.rel_diff);
    }
    r.add("backscatter.Q_refinement", std::abs(values[0] - values[1]) / std::abs(values[1]),
          "N = 48 vs N = 96 at L = 12, Q = " + std::to_string(values[1].real()));
    r.add("backscatter.Q_routes_refined", routes);
  }
}

// ----------------------------------------------------------------- structure

void structure_checks(Recorder& r, const CheckConfig& c, const SphereQuadrature& quad, Diagnostics* diag) {
  const GridSpec spec(c.N, c.L);
  PipelineConfig pc;
  pc.K = c.K;
  GaussianParams pf, pg;
  pf.center = {0.3, -0.2, 0.1};
  pg.center = {-0.4, 0.2, 0.0};
  pg.width = 0.8;
  const ScalarField f = sample_gaussian(spec, pf, diag), g = sample_gaussian(spec, pg, diag);
  const ScalarField B = B2(f, g, quad, pc, diag);
  r.add("backscatter.B2_symmetry", rel_max_diff(B, B2(g, f, quad, pc, diag)));
  const Vec3 v{0.75, -0.5, 0.25};
  r.add("backscatter.B2_translation",
        relative_l2_diff(B2(translate(f, v), translate(g, v), quad, pc, diag), translate(B, v)));

  const ScalarField u = sample_gaussian(spec, GaussianParams{}, diag);
  const ScalarField Bu = B2(u, u, quad, pc, diag);
  r.add("backscatter.B2_support", support_check(u, u, Bu));
  r.add("backscatter.B2_radial", nonradial_fraction(Bu));

  const cplx alpha{1.5, -0.5};
  const ScalarField lhs = B2(alpha * f + u, g, quad, pc, diag);
  const ScalarField rhs = alpha * B + B2(u, g, quad, pc, diag);
  r.add("backscatter.B2_bilinear", rel_max_diff(lhs, rhs));
  r.add("backscatter.B2_scaling", rel_max_diff(B2(cplx(-3.0) * f, g, quad, pc, diag), cplx(-3.0) * B));
}

// -------------------------------------------------------------------- probes

void probe_checks(Recorder& r, const CheckConfig& c, Diagnostics* diag) {
  {
    std::vector<double> x, y;
    for (int k = 1; k <= 5; ++k) {
      const double s = std::ldexp(1.0, -k);
      const auto est = cap_measure_mc({1.0, 0.0, 0.0}, 1.0, 1.0, s, 200000, c.seed);
      x.push_back(std::log(s));
      y.push_back(std::log(est.measure));
    }
    const double slope = fit_line(x, y).slope;
    r.add("sphere.cap_slope", std::abs(slope - 2.0), "slope " + std::to_string(slope));
  }
  {
    double hi = 0.0, lo = INFINITY;
    for (double rr : {1.0, 2.0, 4.0})
      for (double frac : {0.125, 0.25, 0.5}) {
        const double ratio = shell_test(rr, rr * frac, 0.5).ratio;
        hi = std::max(hi, ratio);
        lo = std::min(lo, ratio);
      }
    r.add("radial.shell_band", hi / lo, "max/min over r in {1,2,4}, s/r in {1/8,1/4,1/2}, a = 1/2");
  }
  {
    double excess = -INFINITY;
    std::string note;
    for (double b : {0.5, 1.0, 2.0}) {
      std::vector<double> x, y;
      for (double t : {1.0, 2.0, 4.0, 8.0, 16.0}) {
        CommutatorProbeOptions o;
        o.seed = c.seed;
        x.push_back(std::log(t));
        y.push_back(std::log(commutator_growth_probe(b, t, o).estimate));
      }
      const double slope = fit_line(x, y).slope;
      excess = std::max(excess, slope - b);
      note += (note.empty() ? "" : "; ") + ("b=" + std::to_string(b) + ": " + std::to_string(slope));
    }
    r.add("spectral.commutator_growth", excess, note);
  }
  {
    const FamilyProbe tp = default_family_probe(FamilyKind::Translate);
    const std::vector<ExponentTuple> sigmas{{1, 0, 1, 0, 1, 0}, {1, 0, 1, 0, 2, 0}};
    const auto reports = ratio_sweep(tp.family, sigmas, tp.setup);
    double worst = 0.0;
    std::string note;
    for (const auto& rep : reports) {
      const double expect = rep.sigma.a - rep.sigma.a1 - rep.sigma.a2;
      worst = std::max(worst, std::abs(rep.slope - expect));
      note += (note.empty() ? "" : "; ") + ("sigma " + to_string(rep.sigma) + ": " + std::to_string(rep.slope));
      if (diag) diag->warnings.insert(diag->warnings.end(), rep.warnings.begin(), rep.warnings.end());
    }
    r.add("normprobe.translate_slope", worst, note);
  }
  {
    const FamilyProbe mp = default_family_probe(FamilyKind::Modulate);
    const ExponentTuple sigma{0, 0, 0, 0, 0, 1};
    const RatioReport rep = ratio_sweep(mp.family, sigma, mp.setup);
    const double expect = sigma.b - rep.m - sigma.b1 - sigma.b2;
    if (diag) diag->warnings.insert(diag->warnings.end(), rep.warnings.begin(), rep.warnings.end());
    r.add("normprobe.modulate_slope", std::abs(rep.slope - expect),
          "A in H_(0,b-m), sigma " + to_string(sigma) + ": slope " + std::to_string(rep.slope));
  }
}

// -------------------------------------------------------------------- dyadic

void dyadic_checks(Recorder& r, const CheckConfig& c, Diagnostics* diag) {
  const GridSpec spec(c.N, c.L);
  std::mt19937_64 rng(c.seed + 23);
  const int J = 5;
  const ScalarField f = random_bumps(spec, rng, 4, 6.0);
  const auto pieces = dyadic_decompose(f, J);
  {
    ScalarField sum(spec, Space::Position);
    for (const auto& p : pieces) sum += p;
    r.add("dyadic.telescoping", rel_max_diff(sum, dyadic_envelope(f, J)));
    double outside = 0.0;
    for (int j = 1; j <= J; ++j)
      for (std::size_t m = 0; m < spec.size(); ++m) {
        const Vec3 x = spec.node(m);
        const double rad = std::sqrt(x[0] * x[0] + x[1] * x[1] + x[2] * x[2]);
        if (rad < std::ldexp(1.0, j - 1) || rad > std::ldexp(1.0, j + 1)) outside = std::max(outside, std::abs(pieces[j][m]));
      }
    r.add("dyadic.annular_support", outside);
  }
  {
    const ScalarField small = sample_function(spec, [](const Vec3& x) {
      return cplx(smooth_bump(std::sqrt(x[0] * x[0] + x[1] * x[1] + x[2] * x[2])), 0.0);
    });
    const auto sp = dyadic_decompose(small, J);
    double worst = 0.0;
    for (int j = 2; j <= J; ++j) worst = std::max(worst, max_abs(sp[j]));
    r.add("dyadic.small_support", worst);
  }
  {
    double band = 0.0;
    std::string note;
    for (double rho : {0.0, 1.0}) {
      std::mt19937_64 gen(c.seed + 29);
      double hi = 0.0, lo = INFINITY;
      for (int member = 0; member < 50; ++member) {
        const ScalarField g = random_bumps(spec, gen, 3, 7.0);
        const double ratio = dyadic_norm(g, rho, J) / sobolev_norm(g, {rho, 0.0});
        hi = std::max(hi, ratio);
        lo = std::min(lo, ratio);
      }
      band = std::max(band, hi / lo);
      note += (note.empty() ? "" : "; ") + ("rho=" + std::to_string(rho) + ": [" + std::to_string(lo) + ", " +
                                            std::to_string(hi) + "]");
    }
    r.add("dyadic.norm_band", band, note);
  }
  {
    const RadialFunction f3{[](double rad) { return std::pow(1.0 + rad * rad, -1.5); }, 0.0, 64.0};
    const auto rows = dyadic_cross_decay(f3, f3, 0.5, 0.5, 0.5, 4);
    double hi = 0.0, lo = INFINITY;
    for (const auto& row : rows) {
      hi = std::max(hi, row.scaled);
      lo = std::min(lo, row.scaled);
    }
    r.add("radial.dyadic_cross_decay", hi / lo, "f = g = <x>^{-3}, a' = a'' = a = 1/2, j, k in [0, 4]");
  }
  (void)diag;
}

}  // namespace

std::vector<Check> run_suite(Suite suite, const CheckConfig& config, Diagnostics* diag) {
  validate(config);
  Recorder r(config);
  switch (suite) {
    case Suite::Identities: identity_checks(r, config, load_quadrature(config), diag); break;
    case Suite::Kernels: kernel_checks(r, config, load_quadrature(config), diag); break;
    case Suite::CrossChecks: cross_checks(r, config, load_quadrature(config), diag); break;
    case Suite::Structure: structure_checks(r, config, load_quadrature(config), diag); break;
    case Suite::Probes: probe_checks(r, config, diag); break;
    case Suite::Dyadic: dyadic_checks(r, config, diag); break;
  }
  return r.take();
}

}  // namespace quadscat
