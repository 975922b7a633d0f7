#pragma once

// FFTW-backed transforms in FFTW native index order, plus a cached
// spectrum type for applying Fourier multipliers repeatedly to one field.

#include <cstddef>
#include <span>

#include "quadscat/grid.hpp"

namespace quadscat::fft {

enum class Direction { Forward, Backward };

/// Unnormalized 3D DFT of an n^3 array; Forward uses exp(-2 pi i jk/n).
/// Buffers must come from CVec (64-byte aligned).  in and out may alias.
void transform3d(std::span<const cplx> in, std::span<cplx> out, std::size_t n, Direction dir);

/// Unnormalized 1D DFT of length n.
void transform1d(std::span<const cplx> in, std::span<cplx> out, std::size_t n, Direction dir);

/// Raw DFT of a position-space field.  Multipliers are given as functions of
/// the continuous frequency (xi_x, xi_y, xi_z) of each native mode.
class Spectrum {
 public:
  explicit Spectrum(const ScalarField& f);

  const GridSpec& spec() const { return spec_; }
  std::span<const cplx> raw() const { return raw_; }

  /// F^{-1}[ m(xi) F f ] as a position field.
  template <class Multiplier>
  ScalarField apply(Multiplier&& m) const {
    ScalarField out(spec_, Space::Position);
    apply_into(std::forward<Multiplier>(m), out.values());
    return out;
  }

  template <class Multiplier>
  void apply_into(Multiplier&& m, std::span<cplx> out) const {
    const std::size_t n = spec_.points();
    const double scale = 1.0 / static_cast<double>(spec_.size());
    for (std::size_t p = 0; p < n; ++p) {
      const double xp = spec_.freq_native(p);
      for (std::size_t q = 0; q < n; ++q) {
        const double xq = spec_.freq_native(q);
        const std::size_t row = (p * n + q) * n;
        for (std::size_t r = 0; r < n; ++r) {
          out[row + r] = raw_[row + r] * (scale * m(xp, xq, spec_.freq_native(r)));
        }
      }
    }
    transform3d(out, out, n, Direction::Backward);
  }

  /// f(x - v) for every grid node, written into out (size N^3, aligned).
  /// With real_nyquist the unpaired Nyquist modes get the factor cos(v xi)
  /// instead of exp(-i v xi): translates of real data stay real, at the cost
  /// of exact unitarity on those modes.  Both agree for shifts by whole cells.
  void translated_into(const Vec3& v, std::span<cplx> out, bool real_nyquist = false) const;
  ScalarField translated(const Vec3& v) const;

 private:
  GridSpec spec_;
  CVec raw_;
};

}  // namespace quadscat::fft
