#include "quadscat/sphere.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <map>
#include <random>
#include <sstream>

#include "quadscat/fft.hpp"
#include "quadscat/parallel.hpp"
#include "quadscat/quadrature.hpp"

namespace quadscat {

SphereQuadrature SphereQuadrature::product_gauss(int degree) {
  if (degree < 1) throw std::invalid_argument("SphereQuadrature: degree must be >= 1");
  std::size_t n_gl = static_cast<std::size_t>((degree + 2) / 2);
  if (n_gl % 2 == 1) ++n_gl;
  const std::size_t m = 2 * n_gl;
  const GaussRule rule = gauss_legendre(n_gl);

  std::vector<Vec3> upper;
  std::vector<double> weights;
  for (std::size_t a = n_gl / 2; a < n_gl; ++a) {
    const double z = rule.nodes[a];
    const double rho = std::sqrt((1.0 - z) * (1.0 + z));
    for (std::size_t b = 0; b < m; ++b) {
      const double phi = 2.0 * kPi * (static_cast<double>(b) + 0.5) / static_cast<double>(m);
      upper.push_back({rho * std::cos(phi), rho * std::sin(phi), z});
      weights.push_back(rule.weights[a] * 2.0 * kPi / static_cast<double>(m));
    }
  }
  std::vector<Vec3> nodes = upper;
  for (const auto& w : upper) nodes.push_back({-w[0], -w[1], -w[2]});
  std::vector<double> all = weights;
  all.insert(all.end(), weights.begin(), weights.end());
  return SphereQuadrature(std::move(nodes), std::move(all), degree);
}

SphereQuadrature SphereQuadrature::from_nodes(const std::vector<Vec3>& nodes, const std::vector<double>& weights,
                                              int degree) {
  if (nodes.size() != weights.size() || nodes.empty() || nodes.size() % 2 != 0) {
    throw std::invalid_argument("SphereQuadrature: need an even, nonzero number of nodes with one weight each");
  }
  double total = 0.0;
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    const auto& w = nodes[i];
    const double r = std::sqrt(w[0] * w[0] + w[1] * w[1] + w[2] * w[2]);
    if (std::abs(r - 1.0) > 1e-12) throw std::invalid_argument("SphereQuadrature: node " + std::to_string(i) + " is not a unit vector");
    if (!(weights[i] > 0.0)) throw std::invalid_argument("SphereQuadrature: weights must be positive");
    total += weights[i];
  }
  if (std::abs(total - 4.0 * kPi) > 1e-12 * 4.0 * kPi) {
    std::ostringstream msg;
    msg << std::setprecision(17) << "SphereQuadrature: weights sum to " << total << ", expected 4 pi";
    throw std::invalid_argument(msg.str());
  }

  // Pair every node with its antipode (tolerance 1e-12) and store the second
  // member as the exact negation of the first.
  std::vector<bool> used(nodes.size(), false);
  std::vector<Vec3> first;
  std::vector<double> w_first;
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    if (used[i]) continue;
    used[i] = true;
    std::size_t partner = nodes.size();
    for (std::size_t j = i + 1; j < nodes.size(); ++j) {
      if (used[j]) continue;
      const double d = std::abs(nodes[i][0] + nodes[j][0]) + std::abs(nodes[i][1] + nodes[j][1]) +
                       std::abs(nodes[i][2] + nodes[j][2]);
      if (d < 1e-12) {
        partner = j;
        break;
      }
    }
    if (partner == nodes.size() || std::abs(weights[partner] - weights[i]) > 1e-14 * weights[i]) {
      throw std::invalid_argument("SphereQuadrature: node set is not antipodally symmetric");
    }
    used[partner] = true;
    first.push_back(nodes[i]);
    w_first.push_back(weights[i]);
  }
  std::vector<Vec3> out = first;
  for (const auto& w : first) out.push_back({-w[0], -w[1], -w[2]});
  std::vector<double> wout = w_first;
  wout.insert(wout.end(), w_first.begin(), w_first.end());
  return SphereQuadrature(std::move(out), std::move(wout), degree);
}

SphereQuadrature SphereQuadrature::from_file(const std::filesystem::path& path, int degree) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open sphere node file " + path.string());
  std::vector<Vec3> nodes;
  std::vector<double> weights;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    std::istringstream fields(line);
    Vec3 w;
    double weight;
    if (!(fields >> w[0])) continue;
    if (!(fields >> w[1] >> w[2] >> weight)) {
      throw std::runtime_error(path.string() + ":" + std::to_string(lineno) + ": expected 'wx wy wz weight'");
    }
    nodes.push_back(w);
    weights.push_back(weight);
  }
  return from_nodes(nodes, weights, degree);
}

void SphereQuadrature::write(const std::filesystem::path& path) const {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << "# degree " << degree_ << ", " << size() << " nodes: wx wy wz weight\n" << std::setprecision(17);
  for (std::size_t i = 0; i < size(); ++i) {
    out << nodes_[i][0] << ' ' << nodes_[i][1] << ' ' << nodes_[i][2] << ' ' << weights_[i] << '\n';
  }
}

namespace {

inline std::size_t wrap_index(long long i, std::size_t n) {
  const long long m = static_cast<long long>(n);
  return static_cast<std::size_t>(((i % m) + m) % m);
}

cplx trilinear_at(std::span<const cplx> v, const GridSpec& grid, const Vec3& p) {
  const std::size_t n = grid.points();
  const double d = grid.spacing();
  long long base[3];
  double frac[3];
  for (int a = 0; a < 3; ++a) {
    const double u = (p[a] + grid.half_width()) / d;
    const double fl = std::floor(u);
    base[a] = static_cast<long long>(fl);
    frac[a] = u - fl;
  }
  cplx acc{0.0, 0.0};
  for (int c = 0; c < 8; ++c) {
    const int dx = c >> 2, dy = (c >> 1) & 1, dz = c & 1;
    const double w = (dx ? frac[0] : 1.0 - frac[0]) * (dy ? frac[1] : 1.0 - frac[1]) * (dz ? frac[2] : 1.0 - frac[2]);
    if (w == 0.0) continue;
    acc += w * v[grid.index(wrap_index(base[0] + dx, n), wrap_index(base[1] + dy, n), wrap_index(base[2] + dz, n))];
  }
  return acc;
}

// out(x) = trilinear interpolant of v at x + offset, for every node x.
void trilinear_shift(std::span<const cplx> v, const GridSpec& grid, const Vec3& offset, std::span<cplx> out) {
  const std::size_t n = grid.points();
  const double d = grid.spacing();
  long long shift[3];
  double frac[3];
  for (int a = 0; a < 3; ++a) {
    const double u = offset[a] / d;
    const double fl = std::floor(u);
    shift[a] = static_cast<long long>(fl);
    frac[a] = u - fl;
  }
  std::vector<std::size_t> ix[3][2];
  for (int a = 0; a < 3; ++a)
    for (int s = 0; s < 2; ++s) {
      ix[a][s].resize(n);
      for (std::size_t i = 0; i < n; ++i) ix[a][s][i] = wrap_index(static_cast<long long>(i) + shift[a] + s, n);
    }
  double w[8];
  for (int c = 0; c < 8; ++c) {
    const int dx = c >> 2, dy = (c >> 1) & 1, dz = c & 1;
    w[c] = (dx ? frac[0] : 1.0 - frac[0]) * (dy ? frac[1] : 1.0 - frac[1]) * (dz ? frac[2] : 1.0 - frac[2]);
  }
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      for (std::size_t k = 0; k < n; ++k) {
        cplx acc{0.0, 0.0};
        for (int c = 0; c < 8; ++c) {
          const int dx = c >> 2, dy = (c >> 1) & 1, dz = c & 1;
          acc += w[c] * v[grid.index(ix[0][dx][i], ix[1][dy][j], ix[2][dz][k])];
        }
        out[grid.index(i, j, k)] = acc;
      }
}

}  // namespace

SpectralSampler::SpectralSampler(const ScalarField& f) : n_(f.spec().points()), nodes_(n_) {
  const GridSpec& spec = f.spec();
  if (f.space() == Space::Position) {
    const ScalarField F = forward_transform(f);
    coeffs_.assign(F.values().begin(), F.values().end());
    for (std::size_t c = 0; c < n_; ++c) nodes_[c] = spec.freq(c);
    sign_ = 1.0;
    const double dxi = spec.freq_spacing();
    scale_ = dxi * dxi * dxi / std::pow(2.0 * kPi, 3);
  } else {
    const ScalarField g = inverse_transform(f);
    coeffs_.assign(g.values().begin(), g.values().end());
    for (std::size_t i = 0; i < n_; ++i) nodes_[i] = spec.coord(i);
    sign_ = -1.0;
    const double h = spec.spacing();
    scale_ = h * h * h;
  }
}

SpectralSampler SpectralSampler::transform_of(const ScalarField& f) {
  require_space(f, Space::Position, "SpectralSampler::transform_of");
  const GridSpec& spec = f.spec();
  std::vector<double> nodes(spec.points());
  for (std::size_t i = 0; i < nodes.size(); ++i) nodes[i] = spec.coord(i);
  const double h = spec.spacing();
  return SpectralSampler(spec.points(), CVec(f.values().begin(), f.values().end()), std::move(nodes), -1.0, h * h * h);
}

cplx SpectralSampler::operator()(const Vec3& p) const {
  // Index 0 is the unpaired Nyquist node; using cos there keeps the
  // interpolant real for real data and exact on the lattice.
  std::vector<cplx> e[3];
  for (int a = 0; a < 3; ++a) {
    e[a].resize(n_);
    for (std::size_t c = 0; c < n_; ++c) {
      const double phase = sign_ * p[a] * nodes_[c];
      e[a][c] = c == 0 ? cplx(std::cos(phase), 0.0) : std::polar(1.0, phase);
    }
  }
  cplx acc{0.0, 0.0};
  for (std::size_t a = 0; a < n_; ++a) {
    cplx plane{0.0, 0.0};
    for (std::size_t b = 0; b < n_; ++b) {
      const cplx* row = coeffs_.data() + (a * n_ + b) * n_;
      cplx line{0.0, 0.0};
      for (std::size_t c = 0; c < n_; ++c) line += e[2][c] * row[c];
      plane += e[1][b] * line;
    }
    acc += e[0][a] * plane;
  }
  return scale_ * acc;
}

std::vector<cplx> sample_offgrid(const ScalarField& f, const std::vector<Vec3>& points, Interpolation method) {
  std::vector<cplx> out(points.size());
  if (method == Interpolation::Trilinear) {
    const GridSpec grid = f.sample_grid();
    for (std::size_t i = 0; i < points.size(); ++i) out[i] = trilinear_at(f.values(), grid, points[i]);
    return out;
  }
  const SpectralSampler sampler(f);
  parallel_for(points.size(), [&](std::size_t i) { out[i] = sampler(points[i]); });
  return out;
}

double effective_radius(const ScalarField& f, double rel_threshold) {
  const double peak = max_abs(f);
  if (peak == 0.0) return 0.0;
  const GridSpec grid = f.sample_grid();
  double r2 = 0.0;
  for (std::size_t i = 0; i < f.size(); ++i) {
    if (std::abs(f[i]) <= rel_threshold * peak) continue;
    const Vec3 x = grid.node(i);
    r2 = std::max(r2, x[0] * x[0] + x[1] * x[1] + x[2] * x[2]);
  }
  return std::sqrt(r2);
}

SphericalMeanEvaluator::SphericalMeanEvaluator(const ScalarField& f, const ScalarField& g, const SphereQuadrature& quad,
                                               const SphericalMeanOptions& options)
    : spec_(f.spec()), quad_(quad), method_(options.interpolation), same_(&f == &g), f_(f), g_(g) {
  require_space(f, Space::Position, "bilinear_spherical_S");
  require_space(g, Space::Position, "bilinear_spherical_S");
  require_same_grid(f, g, "bilinear_spherical_S");
  if (method_ == Interpolation::Spectral) {
    fs_.emplace(f);
    if (!same_) gs_.emplace(g);
  }
  rf_ = options.support_f ? *options.support_f : effective_radius(f);
  rg_ = options.support_g ? *options.support_g : (same_ ? rf_ : effective_radius(g));
  horizon_ = spec_.half_width() - 0.5 * (rf_ + rg_);
}

void SphericalMeanEvaluator::check_horizon(double t, Diagnostics* diag) {
  if (t > horizon_ && !warned_) {
    warned_ = true;
    std::ostringstream msg;
    msg << "spherical mean: t = " << t << " exceeds the wrap-safe horizon " << horizon_
        << " (periodic images may contaminate S)";
    warn(diag, msg.str());
  }
}

void SphericalMeanEvaluator::evaluate_into(double t, std::span<cplx> out) const {
  std::fill(out.begin(), out.end(), cplx{0.0, 0.0});
  if (t == 0.0) return;
  const std::size_t size = spec_.size();
  CVec fp(size), fm(size), gp(size), gm(size);
  for (std::size_t i = 0; i < quad_.pairs(); ++i) {
    const Vec3& w = quad_.nodes()[i];
    const Vec3 plus{t * w[0], t * w[1], t * w[2]};
    const Vec3 minus{-plus[0], -plus[1], -plus[2]};
    shifted(true, plus, fp);
    shifted(true, minus, fm);
    const double wt = quad_.weights()[i];
    if (same_) {
      for (std::size_t p = 0; p < size; ++p) out[p] += wt * (fp[p] * fm[p] + fm[p] * fp[p]);
    } else {
      shifted(false, plus, gp);
      shifted(false, minus, gm);
      for (std::size_t p = 0; p < size; ++p) out[p] += wt * (fp[p] * gm[p] + fm[p] * gp[p]);
    }
  }
  for (auto& v : out) v *= t;
}

ScalarField SphericalMeanEvaluator::evaluate(double t) const {
  ScalarField out(spec_, Space::Position);
  evaluate_into(t, out.values());
  return out;
}

// Values of f (first) or g at x + offset for all nodes x; f(x + v) is f
// translated by -v.
void SphericalMeanEvaluator::shifted(bool first, const Vec3& offset, CVec& out) const {
  if (method_ == Interpolation::Spectral) {
    const fft::Spectrum& s = first ? *fs_ : *gs_;
    s.translated_into({-offset[0], -offset[1], -offset[2]}, out, true);
  } else {
    trilinear_shift((first ? f_ : g_).values(), spec_, offset, out);
  }
}

ScalarField bilinear_spherical_S(const ScalarField& f, const ScalarField& g, double t, const SphereQuadrature& quad,
                                 const SphericalMeanOptions& options, Diagnostics* diag) {
  if (t < 0.0) throw std::invalid_argument("bilinear_spherical_S: t must be nonnegative");
  SphericalMeanEvaluator engine(f, g, quad, options);
  engine.check_horizon(t, diag);
  return engine.evaluate(t);
}

SpaceTimeField spherical_mean_slices(const ScalarField& f, const ScalarField& g, double dt, std::size_t count,
                                     const SphereQuadrature& quad, const SphericalMeanOptions& options,
                                     Diagnostics* diag) {
  SphericalMeanEvaluator engine(f, g, quad, options);
  SpaceTimeField out(f.spec(), dt);
  if (count == 0) return out;
  engine.check_horizon(static_cast<double>(count - 1) * dt, diag);
  std::vector<ScalarField> slices(count, ScalarField(f.spec(), Space::Position));
  parallel_for(count, [&](std::size_t k) { engine.evaluate_into(static_cast<double>(k) * dt, slices[k].values()); });
  for (auto& s : slices) out.push_back(std::move(s));
  return out;
}

cplx bilinear_spherical_S_at(const SpectralSampler& f, const SpectralSampler& g, const Vec3& x, double t,
                             const SphereQuadrature& quad) {
  if (t == 0.0) return {0.0, 0.0};
  cplx acc{0.0, 0.0};
  for (std::size_t i = 0; i < quad.pairs(); ++i) {
    const Vec3& w = quad.nodes()[i];
    const Vec3 p{x[0] + t * w[0], x[1] + t * w[1], x[2] + t * w[2]};
    const Vec3 m{x[0] - t * w[0], x[1] - t * w[1], x[2] - t * w[2]};
    acc += quad.weights()[i] * (f(p) * g(m) + f(m) * g(p));
  }
  return t * acc;
}

cplx bilinear_spherical_S_at(const ScalarField& f, const ScalarField& g, const Vec3& x, double t,
                             const SphereQuadrature& quad, Interpolation method) {
  require_same_grid(f, g, "bilinear_spherical_S_at");
  if (method == Interpolation::Spectral) return bilinear_spherical_S_at(SpectralSampler(f), SpectralSampler(g), x, t, quad);
  std::vector<Vec3> points;
  for (std::size_t i = 0; i < quad.pairs(); ++i) {
    const Vec3& w = quad.nodes()[i];
    points.push_back({x[0] + t * w[0], x[1] + t * w[1], x[2] + t * w[2]});
    points.push_back({x[0] - t * w[0], x[1] - t * w[1], x[2] - t * w[2]});
  }
  const auto fv = sample_offgrid(f, points, method), gv = sample_offgrid(g, points, method);
  cplx acc{0.0, 0.0};
  for (std::size_t i = 0; i < quad.pairs(); ++i)
    acc += quad.weights()[i] * (fv[2 * i] * gv[2 * i + 1] + fv[2 * i + 1] * gv[2 * i]);
  return t * acc;
}

cplx spherical_pairing(const ScalarField& f, double t, const SphereQuadrature& quad, Interpolation method) {
  if (t < 0.0) throw std::invalid_argument("spherical_pairing: t must be nonnegative");
  std::vector<Vec3> points;
  points.reserve(quad.size());
  for (const auto& w : quad.nodes()) points.push_back({t * w[0], t * w[1], t * w[2]});
  const auto values = sample_offgrid(f, points, method);
  const std::size_t half = quad.pairs();
  cplx acc{0.0, 0.0};
  for (std::size_t i = 0; i < half; ++i) acc += quad.weights()[i] * (values[i] + values[i + half]);
  return acc;
}

CapEstimate cap_measure_mc(const Vec3& x, double t, double r, double s, std::size_t samples, std::uint64_t seed) {
  if (!(r > 0.0) || !(s > 0.0)) throw std::invalid_argument("cap_measure_mc: r and s must be positive");
  if (samples == 0) throw std::invalid_argument("cap_measure_mc: need at least one sample");
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(-1.0, 1.0);
  std::uniform_real_distribution<double> angle(0.0, 2.0 * kPi);
  CapEstimate est;
  est.samples = samples;
  for (std::size_t i = 0; i < samples; ++i) {
    const double z = unit(rng);
    const double phi = angle(rng);
    const double rho = std::sqrt(std::max(0.0, 1.0 - z * z));
    const Vec3 w{rho * std::cos(phi), rho * std::sin(phi), z};
    double dm = 0.0, dp = 0.0;
    for (int a = 0; a < 3; ++a) {
      dm += (x[a] - t * w[a]) * (x[a] - t * w[a]);
      dp += (x[a] + t * w[a]) * (x[a] + t * w[a]);
    }
    dm = std::sqrt(dm);
    if (dm > 0.5 * r && dm < 2.0 * r && std::sqrt(dp) < s) ++est.hits;
  }
  const double p = static_cast<double>(est.hits) / static_cast<double>(samples);
  est.measure = 4.0 * kPi * p;
  est.stderr_ = 4.0 * kPi * std::sqrt(p * (1.0 - p) / static_cast<double>(samples));
  return est;
}

}  // namespace quadscat
