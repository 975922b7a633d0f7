#include "quadscat/spacetime.hpp"

#include <cmath>

#include "quadscat/fft.hpp"

namespace quadscat {

SpaceTimeField::SpaceTimeField(GridSpec spec, double dt) : spec_(spec), dt_(dt) {
  if (!(dt > 0.0)) throw std::invalid_argument("SpaceTimeField: dt must be positive");
}

void SpaceTimeField::push_back(ScalarField slice) {
  if (!(slice.spec() == spec_)) throw std::invalid_argument("SpaceTimeField: slice grid mismatch");
  require_space(slice, Space::Position, "SpaceTimeField::push_back");
  slices_.push_back(std::move(slice));
}

SpaceTimeField& SpaceTimeField::operator+=(const SpaceTimeField& other) {
  if (!(other.spec_ == spec_) || other.dt_ != dt_ || other.size() != size()) {
    throw std::invalid_argument("SpaceTimeField::operator+=: layout mismatch");
  }
  for (std::size_t k = 0; k < slices_.size(); ++k) slices_[k] += other.slices_[k];
  return *this;
}

SpaceTimeField& SpaceTimeField::operator*=(cplx c) {
  for (auto& s : slices_) s *= c;
  return *this;
}

namespace {

// Weight of sample k in the full-line (or half-line) trapezoid sum.
double time_weight(std::size_t k, std::size_t last, TimeExtension ext) {
  const bool end = (k == 0 || k == last);
  if (ext == TimeExtension::HalfLine) return end ? 0.5 : 1.0;
  return end ? 1.0 : 2.0;
}

double weighted_sum(const SpaceTimeField& u, double a, TimeExtension ext) {
  const GridSpec& spec = u.spec();
  const std::size_t n = spec.points();
  const std::size_t last = u.size() - 1;
  double acc = 0.0;
  for (std::size_t k = 0; k < u.size(); ++k) {
    const double t2 = u.t(k) * u.t(k);
    const auto vals = u.slice(k).values();
    double slice_acc = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const double x2 = spec.coord(i) * spec.coord(i);
      for (std::size_t j = 0; j < n; ++j) {
        const double y2 = spec.coord(j) * spec.coord(j);
        const std::size_t row = (i * n + j) * n;
        for (std::size_t l = 0; l < n; ++l) {
          const double z2 = spec.coord(l) * spec.coord(l);
          const double w = a == 0.0 ? 1.0 : std::pow(1.0 + x2 + y2 + z2 + t2, a);
          slice_acc += w * std::norm(vals[row + l]);
        }
      }
    }
    acc += time_weight(k, last, ext) * slice_acc;
  }
  const double h = spec.spacing();
  return acc * h * h * h * u.dt();
}

}  // namespace

double spacetime_sobolev_norm(const SpaceTimeField& u, SobolevIndex idx, TimeExtension ext) {
  if (u.size() < 2) throw std::invalid_argument("spacetime_sobolev_norm: need at least two time slices");
  if (idx.b == 0.0) return std::sqrt(weighted_sum(u, idx.a, ext));
  if (ext == TimeExtension::HalfLine) {
    throw std::invalid_argument("spacetime_sobolev_norm: derivative norms need an odd or even time extension");
  }

  // <D_{x,t}>^b on the 2K-periodic extension in t, spectral in x.
  const GridSpec& spec = u.spec();
  const std::size_t n = spec.points();
  const std::size_t K = u.size() - 1;
  const std::size_t period = 2 * K;
  const double sign = ext == TimeExtension::Odd ? -1.0 : 1.0;

  std::vector<CVec> spectra;
  spectra.reserve(u.size());
  for (std::size_t k = 0; k <= K; ++k) {
    CVec raw(spec.size());
    fft::transform3d(u.slice(k).values(), raw, n, fft::Direction::Forward);
    spectra.push_back(std::move(raw));
  }

  std::vector<double> tau2(period);
  for (std::size_t j = 0; j < period; ++j) {
    const double jj = j < K ? static_cast<double>(j) : static_cast<double>(j) - static_cast<double>(period);
    const double tau = 2.0 * kPi * jj / (static_cast<double>(period) * u.dt());
    tau2[j] = tau * tau;
  }

  CVec seq(period), hat(period);
  const double inv = 1.0 / static_cast<double>(period);
  for (std::size_t p = 0; p < n; ++p) {
    const double a2 = spec.freq_native(p) * spec.freq_native(p);
    for (std::size_t q = 0; q < n; ++q) {
      const double b2 = spec.freq_native(q) * spec.freq_native(q);
      for (std::size_t r = 0; r < n; ++r) {
        const double xi2 = a2 + b2 + spec.freq_native(r) * spec.freq_native(r);
        const std::size_t m = (p * n + q) * n + r;
        for (std::size_t k = 0; k <= K; ++k) seq[k] = spectra[k][m];
        for (std::size_t k = 1; k < K; ++k) seq[period - k] = sign * spectra[k][m];
        fft::transform1d(seq, hat, period, fft::Direction::Forward);
        for (std::size_t j = 0; j < period; ++j) hat[j] *= inv * std::pow(1.0 + xi2 + tau2[j], 0.5 * idx.b);
        fft::transform1d(hat, seq, period, fft::Direction::Backward);
        for (std::size_t k = 0; k <= K; ++k) spectra[k][m] = seq[k];
      }
    }
  }

  SpaceTimeField filtered(spec, u.dt());
  const double scale = 1.0 / static_cast<double>(spec.size());
  for (std::size_t k = 0; k <= K; ++k) {
    ScalarField s(spec, Space::Position);
    fft::transform3d(spectra[k], s.values(), n, fft::Direction::Backward);
    s *= scale;
    filtered.push_back(std::move(s));
    CVec().swap(spectra[k]);
  }
  return std::sqrt(weighted_sum(filtered, idx.a, ext));
}

}  // namespace quadscat
