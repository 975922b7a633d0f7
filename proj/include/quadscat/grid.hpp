#pragma once

// Periodic computational domain for fields on R^3.
//
// A GridSpec describes the cube [-L, L)^3 sampled with N points per axis,
// x_i = -L + i*h with h = 2L/N.  Frequency-space fields live on the dual
// lattice xi_k = pi*k/L, k = -N/2 .. N/2-1, stored in centered order so that
// index c corresponds to k = c - N/2.  The continuous Fourier transform is
// approximated with the convention
//
//     fhat(xi) = \int f(x) exp(-i x.xi) dx,
//     f(x)     = (2 pi)^{-3} \int fhat(xi) exp(i x.xi) dxi.

#include <array>
#include <complex>
#include <cstddef>
#include <functional>
#include <new>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace quadscat {

using cplx = std::complex<double>;
using Vec3 = std::array<double, 3>;

inline constexpr double kPi = 3.14159265358979323846;

/// 64-byte aligned storage so FFTW can use SIMD kernels on every buffer.
template <class T>
struct AlignedAllocator {
  using value_type = T;
  AlignedAllocator() noexcept = default;
  template <class U>
  AlignedAllocator(const AlignedAllocator<U>&) noexcept {}
  T* allocate(std::size_t n) {
    return static_cast<T*>(::operator new(n * sizeof(T), std::align_val_t{64}));
  }
  void deallocate(T* p, std::size_t) noexcept {
    ::operator delete(p, std::align_val_t{64});
  }
  template <class U>
  bool operator==(const AlignedAllocator<U>&) const noexcept { return true; }
};

using CVec = std::vector<cplx, AlignedAllocator<cplx>>;

/// Violation of an operation precondition that the caller controls
/// (wrong space tag, mismatched grids).
class ContractError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

/// Sink for non-fatal warnings (support violations, wrap contamination,
/// truncation).  Operations accept an optional pointer to one.
struct Diagnostics {
  std::vector<std::string> warnings;
  void warn(std::string message) { warnings.push_back(std::move(message)); }
  bool empty() const { return warnings.empty(); }
};

inline void warn(Diagnostics* diag, std::string message) {
  if (diag != nullptr) diag->warn(std::move(message));
}

enum class Space { Position, Frequency };

std::string to_string(Space space);
Space space_from_string(const std::string& text);

class GridSpec {
 public:
  /// Throws std::invalid_argument unless N is even, N >= 16 and L > 0.
  GridSpec(std::size_t points_per_axis, double half_width);

  std::size_t points() const { return n_; }
  double half_width() const { return half_width_; }
  double spacing() const { return 2.0 * half_width_ / static_cast<double>(n_); }
  double freq_spacing() const { return kPi / half_width_; }
  /// Half-width pi*N/(2L) of the frequency lattice.
  double freq_half_width() const { return 0.5 * static_cast<double>(n_) * freq_spacing(); }
  std::size_t size() const { return n_ * n_ * n_; }

  double coord(std::size_t i) const { return -half_width_ + static_cast<double>(i) * spacing(); }
  /// Centered frequency node: index c <-> k = c - N/2.
  double freq(std::size_t c) const {
    return (static_cast<double>(c) - 0.5 * static_cast<double>(n_)) * freq_spacing();
  }
  /// Frequency of FFT-native index p (p < N/2 -> k = p, otherwise k = p - N).
  double freq_native(std::size_t p) const {
    const auto k = p < n_ / 2 ? static_cast<double>(p) : static_cast<double>(p) - static_cast<double>(n_);
    return k * freq_spacing();
  }

  /// The frequency lattice viewed as a position grid (N, pi*N/(2L)).
  GridSpec dual() const { return GridSpec(n_, freq_half_width()); }

  std::size_t index(std::size_t i, std::size_t j, std::size_t k) const { return (i * n_ + j) * n_ + k; }
  Vec3 node(std::size_t flat) const;
  /// Index of the node at the origin (exists because N is even).
  std::size_t origin_index() const { return index(n_ / 2, n_ / 2, n_ / 2); }

  bool operator==(const GridSpec& other) const {
    return n_ == other.n_ && half_width_ == other.half_width_;
  }

 private:
  std::size_t n_;
  double half_width_;
};

/// Complex samples of a function on a GridSpec, row-major with z fastest,
/// tagged as living in position or frequency space.
class ScalarField {
 public:
  ScalarField(GridSpec spec, Space space);
  ScalarField(GridSpec spec, Space space, CVec values);

  const GridSpec& spec() const { return spec_; }
  Space space() const { return space_; }
  std::span<const cplx> values() const { return values_; }
  std::span<cplx> values() { return values_; }
  std::size_t size() const { return values_.size(); }

  cplx operator[](std::size_t i) const { return values_[i]; }
  cplx& operator[](std::size_t i) { return values_[i]; }
  cplx at(std::size_t i, std::size_t j, std::size_t k) const { return values_[spec_.index(i, j, k)]; }

  /// Grid on which the samples are laid out: spec() for position fields,
  /// spec().dual() for frequency fields.
  GridSpec sample_grid() const { return space_ == Space::Position ? spec_ : spec_.dual(); }
  /// Volume element of the sample lattice (h^3 or dxi^3).
  double cell_volume() const;

  ScalarField& operator+=(const ScalarField& other);
  ScalarField& operator-=(const ScalarField& other);
  ScalarField& operator*=(cplx c);

  friend ScalarField operator+(ScalarField a, const ScalarField& b) { return a += b; }
  friend ScalarField operator-(ScalarField a, const ScalarField& b) { return a -= b; }
  friend ScalarField operator*(cplx c, ScalarField a) { return a *= c; }

 private:
  GridSpec spec_;
  Space space_;
  CVec values_;
};

void require_same_grid(const ScalarField& a, const ScalarField& b, const char* op);
void require_space(const ScalarField& f, Space expected, const char* op);

/// h^3-scaled DFT approximating the continuous transform on the frequency nodes.
ScalarField forward_transform(const ScalarField& f);
/// Inverse of forward_transform including the (2 pi)^{-3} factor.
ScalarField inverse_transform(const ScalarField& F);

struct GaussianParams {
  Vec3 center{0.0, 0.0, 0.0};
  double width = 1.0;
  Vec3 modulation{0.0, 0.0, 0.0};
  cplx amplitude{1.0, 0.0};

  /// Radius of the effective support (the 6-sigma ball).
  double support_radius() const { return 6.0 * width; }
};

/// amplitude * exp(-|x - c|^2 / (2 w^2)) * exp(i k.x).  Warns when the
/// 6-sigma ball leaves the box.
ScalarField sample_gaussian(const GridSpec& spec, const GaussianParams& params, Diagnostics* diag = nullptr);

/// Samples an arbitrary function of position on the grid.
ScalarField sample_function(const GridSpec& spec, const std::function<cplx(const Vec3&)>& fn);

double l2_norm(const ScalarField& f);
/// Sesquilinear, conjugate-linear in the first slot.
cplx inner_product(const ScalarField& f, const ScalarField& g);
/// Real-bilinear pairing \int f g (no conjugation).
cplx bilinear_pairing(const ScalarField& f, const ScalarField& g);

/// Periodic translation f(x - v), exact for band-limited data.
ScalarField translate(const ScalarField& f, const Vec3& v);
/// f(-x); exact on the node set.
ScalarField reflect(const ScalarField& f);
/// Restriction of a field on (2N, L) to the coarse grid (N, L).
ScalarField restrict_to(const ScalarField& fine, const GridSpec& coarse);

double max_abs(const ScalarField& f);
double max_abs_diff(const ScalarField& a, const ScalarField& b);
/// ||a - b|| / ||b|| (absolute when ||b|| = 0).
double relative_l2_diff(const ScalarField& a, const ScalarField& b);

}  // namespace quadscat
