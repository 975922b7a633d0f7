#include "quadscat/grid.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include "quadscat/fft.hpp"

namespace quadscat {

std::string to_string(Space space) { return space == Space::Position ? "position" : "frequency"; }

Space space_from_string(const std::string& text) {
  if (text == "position") return Space::Position;
  if (text == "frequency") return Space::Frequency;
  throw std::invalid_argument("unknown space tag '" + text + "'");
}

GridSpec::GridSpec(std::size_t points_per_axis, double half_width)
    : n_(points_per_axis), half_width_(half_width) {
  if (n_ < 16 || n_ % 2 != 0) {
    throw std::invalid_argument("GridSpec: points per axis must be even and >= 16 (got " + std::to_string(n_) + ")");
  }
  if (!(half_width_ > 0.0) || !std::isfinite(half_width_)) {
    throw std::invalid_argument("GridSpec: half-width must be positive and finite");
  }
}

Vec3 GridSpec::node(std::size_t flat) const {
  const std::size_t k = flat % n_;
  const std::size_t j = (flat / n_) % n_;
  const std::size_t i = flat / (n_ * n_);
  return {coord(i), coord(j), coord(k)};
}

ScalarField::ScalarField(GridSpec spec, Space space) : spec_(spec), space_(space), values_(spec.size()) {}

ScalarField::ScalarField(GridSpec spec, Space space, CVec values)
    : spec_(spec), space_(space), values_(std::move(values)) {
  if (values_.size() != spec_.size()) throw std::invalid_argument("ScalarField: value count does not match grid");
}

double ScalarField::cell_volume() const {
  const double d = space_ == Space::Position ? spec_.spacing() : spec_.freq_spacing();
  return d * d * d;
}

ScalarField& ScalarField::operator+=(const ScalarField& other) {
  require_same_grid(*this, other, "operator+=");
  for (std::size_t i = 0; i < values_.size(); ++i) values_[i] += other.values_[i];
  return *this;
}

ScalarField& ScalarField::operator-=(const ScalarField& other) {
  require_same_grid(*this, other, "operator-=");
  for (std::size_t i = 0; i < values_.size(); ++i) values_[i] -= other.values_[i];
  return *this;
}

ScalarField& ScalarField::operator*=(cplx c) {
  for (auto& v : values_) v *= c;
  return *this;
}

void require_same_grid(const ScalarField& a, const ScalarField& b, const char* op) {
  if (!(a.spec() == b.spec())) throw std::invalid_argument(std::string(op) + ": mismatched GridSpec");
  if (a.space() != b.space()) throw ContractError(std::string(op) + ": operands live in different spaces");
}

void require_space(const ScalarField& f, Space expected, const char* op) {
  if (f.space() != expected) {
    throw ContractError(std::string(op) + ": expected a " + to_string(expected) + "-space field, got " +
                        to_string(f.space()));
  }
}

namespace {

// (-1)^(c - N/2) for centered index c.
inline double alternating(std::size_t c, std::size_t n) { return ((c + n / 2) % 2 == 0) ? 1.0 : -1.0; }

}  // namespace

ScalarField forward_transform(const ScalarField& f) {
  require_space(f, Space::Position, "forward_transform");
  const GridSpec& spec = f.spec();
  const std::size_t n = spec.points();
  CVec raw(spec.size());
  fft::transform3d(f.values(), raw, n, fft::Direction::Forward);

  const double h = spec.spacing();
  const double h3 = h * h * h;
  ScalarField out(spec, Space::Frequency);
  for (std::size_t a = 0; a < n; ++a) {
    const std::size_t pa = (a + n / 2) % n;
    for (std::size_t b = 0; b < n; ++b) {
      const std::size_t pb = (b + n / 2) % n;
      const double sab = alternating(a, n) * alternating(b, n) * h3;
      for (std::size_t c = 0; c < n; ++c) {
        const std::size_t pc = (c + n / 2) % n;
        out[spec.index(a, b, c)] = sab * alternating(c, n) * raw[spec.index(pa, pb, pc)];
      }
    }
  }
  return out;
}

ScalarField inverse_transform(const ScalarField& F) {
  require_space(F, Space::Frequency, "inverse_transform");
  const GridSpec& spec = F.spec();
  const std::size_t n = spec.points();
  const double h = spec.spacing();
  const double scale = 1.0 / (static_cast<double>(spec.size()) * h * h * h);

  ScalarField out(spec, Space::Position);
  auto raw = out.values();
  for (std::size_t a = 0; a < n; ++a) {
    const std::size_t pa = (a + n / 2) % n;
    for (std::size_t b = 0; b < n; ++b) {
      const std::size_t pb = (b + n / 2) % n;
      const double sab = alternating(a, n) * alternating(b, n) * scale;
      for (std::size_t c = 0; c < n; ++c) {
        const std::size_t pc = (c + n / 2) % n;
        raw[spec.index(pa, pb, pc)] = sab * alternating(c, n) * F[spec.index(a, b, c)];
      }
    }
  }
  fft::transform3d(raw, raw, n, fft::Direction::Backward);
  return out;
}

ScalarField sample_gaussian(const GridSpec& spec, const GaussianParams& params, Diagnostics* diag) {
  if (!(params.width > 0.0)) throw std::invalid_argument("sample_gaussian: width must be positive");
  const double reach = std::sqrt(params.center[0] * params.center[0] + params.center[1] * params.center[1] +
                                 params.center[2] * params.center[2]) +
                       params.support_radius();
  if (reach >= spec.half_width()) {
    std::ostringstream msg;
    msg << "sample_gaussian: 6-sigma ball reaches radius " << reach << " >= box half-width " << spec.half_width();
    warn(diag, msg.str());
  }
  const double inv2w2 = 1.0 / (2.0 * params.width * params.width);
  return sample_function(spec, [&](const Vec3& x) {
    double r2 = 0.0, phase = 0.0;
    for (int d = 0; d < 3; ++d) {
      const double dx = x[d] - params.center[d];
      r2 += dx * dx;
      phase += params.modulation[d] * x[d];
    }
    return params.amplitude * std::exp(-r2 * inv2w2) * std::polar(1.0, phase);
  });
}

ScalarField sample_function(const GridSpec& spec, const std::function<cplx(const Vec3&)>& fn) {
  ScalarField out(spec, Space::Position);
  const std::size_t n = spec.points();
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      for (std::size_t k = 0; k < n; ++k) out[spec.index(i, j, k)] = fn({spec.coord(i), spec.coord(j), spec.coord(k)});
  return out;
}

double l2_norm(const ScalarField& f) {
  double acc = 0.0;
  for (const auto& v : f.values()) acc += std::norm(v);
  return std::sqrt(acc * f.cell_volume());
}

cplx inner_product(const ScalarField& f, const ScalarField& g) {
  require_same_grid(f, g, "inner_product");
  cplx acc{0.0, 0.0};
  for (std::size_t i = 0; i < f.size(); ++i) acc += std::conj(f[i]) * g[i];
  return acc * f.cell_volume();
}

cplx bilinear_pairing(const ScalarField& f, const ScalarField& g) {
  require_same_grid(f, g, "bilinear_pairing");
  cplx acc{0.0, 0.0};
  for (std::size_t i = 0; i < f.size(); ++i) acc += f[i] * g[i];
  return acc * f.cell_volume();
}

ScalarField translate(const ScalarField& f, const Vec3& v) {
  require_space(f, Space::Position, "translate");
  return fft::Spectrum(f).translated(v);
}

ScalarField reflect(const ScalarField& f) {
  const GridSpec& spec = f.spec();
  const std::size_t n = spec.points();
  ScalarField out(spec, f.space());
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      for (std::size_t k = 0; k < n; ++k)
        out[spec.index((n - i) % n, (n - j) % n, (n - k) % n)] = f[spec.index(i, j, k)];
  return out;
}

ScalarField restrict_to(const ScalarField& fine, const GridSpec& coarse) {
  require_space(fine, Space::Position, "restrict_to");
  const GridSpec& spec = fine.spec();
  if (spec.points() != 2 * coarse.points() || spec.half_width() != coarse.half_width()) {
    throw std::invalid_argument("restrict_to: fine grid must be (2N, L) for coarse (N, L)");
  }
  ScalarField out(coarse, Space::Position);
  const std::size_t n = coarse.points();
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      for (std::size_t k = 0; k < n; ++k) out[coarse.index(i, j, k)] = fine[spec.index(2 * i, 2 * j, 2 * k)];
  return out;
}

double max_abs(const ScalarField& f) {
  double m = 0.0;
  for (const auto& v : f.values()) m = std::max(m, std::abs(v));
  return m;
}

double max_abs_diff(const ScalarField& a, const ScalarField& b) {
  require_same_grid(a, b, "max_abs_diff");
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
  return m;
}

double relative_l2_diff(const ScalarField& a, const ScalarField& b) {
  require_same_grid(a, b, "relative_l2_diff");
  double num = 0.0, den = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    num += std::norm(a[i] - b[i]);
    den += std::norm(b[i]);
  }
  return den > 0.0 ? std::sqrt(num / den) : std::sqrt(num * a.cell_volume());
}

}  // namespace quadscat
