#include "quadscat/fft.hpp"

#include <fftw3.h>

#include <map>
#include <mutex>
#include <tuple>

namespace quadscat::fft {
namespace {

// FFTW planning is not thread-safe; execution with new-array interface is.
std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}

struct PlanKey {
  int rank;
  std::size_t n;
  Direction dir;
  bool in_place;
  auto tie() const { return std::tie(rank, n, dir, in_place); }
  bool operator<(const PlanKey& o) const { return tie() < o.tie(); }
};

fftw_plan get_plan(const PlanKey& key) {
  std::lock_guard<std::mutex> lock(planner_mutex());
  static std::map<PlanKey, fftw_plan> cache;
  if (auto it = cache.find(key); it != cache.end()) return it->second;

  const std::size_t total = key.rank == 3 ? key.n * key.n * key.n : key.n;
  CVec a(total), b(total);
  auto* pa = reinterpret_cast<fftw_complex*>(a.data());
  auto* pb = key.in_place ? pa : reinterpret_cast<fftw_complex*>(b.data());
  const int sign = key.dir == Direction::Forward ? FFTW_FORWARD : FFTW_BACKWARD;
  const int n = static_cast<int>(key.n);
  fftw_plan plan = key.rank == 3 ? fftw_plan_dft_3d(n, n, n, pa, pb, sign, FFTW_MEASURE)
                                 : fftw_plan_dft_1d(n, pa, pb, sign, FFTW_MEASURE);
  if (plan == nullptr) throw std::runtime_error("fftw: plan creation failed");
  cache.emplace(key, plan);
  return plan;
}

void execute(int rank, std::span<const cplx> in, std::span<cplx> out, std::size_t n, Direction dir) {
  const bool in_place = in.data() == out.data();
  fftw_plan plan = get_plan({rank, n, dir, in_place});
  // fftw_execute_dft does not modify the input of an out-of-place c2c plan.
  auto* pin = reinterpret_cast<fftw_complex*>(const_cast<cplx*>(in.data()));
  auto* pout = reinterpret_cast<fftw_complex*>(out.data());
  fftw_execute_dft(plan, pin, pout);
}

}  // namespace

void transform3d(std::span<const cplx> in, std::span<cplx> out, std::size_t n, Direction dir) {
  if (in.size() != n * n * n || out.size() != n * n * n) {
    throw std::invalid_argument("transform3d: buffer size does not match n^3");
  }
  execute(3, in, out, n, dir);
}

void transform1d(std::span<const cplx> in, std::span<cplx> out, std::size_t n, Direction dir) {
  if (in.size() != n || out.size() != n) throw std::invalid_argument("transform1d: buffer size mismatch");
  execute(1, in, out, n, dir);
}

Spectrum::Spectrum(const ScalarField& f) : spec_(f.spec()), raw_(f.size()) {
  require_space(f, Space::Position, "Spectrum");
  transform3d(f.values(), raw_, spec_.points(), Direction::Forward);
}

void Spectrum::translated_into(const Vec3& v, std::span<cplx> out, bool real_nyquist) const {
  const std::size_t n = spec_.points();
  const double scale = 1.0 / static_cast<double>(spec_.size());
  std::vector<cplx> px(n), py(n), pz(n);
  for (std::size_t p = 0; p < n; ++p) {
    const double xi = spec_.freq_native(p);
    px[p] = std::polar(scale, -v[0] * xi);
    py[p] = std::polar(1.0, -v[1] * xi);
    pz[p] = std::polar(1.0, -v[2] * xi);
  }
  if (real_nyquist) {
    const double xi = spec_.freq_native(n / 2);
    px[n / 2] = scale * std::cos(v[0] * xi);
    py[n / 2] = std::cos(v[1] * xi);
    pz[n / 2] = std::cos(v[2] * xi);
  }
  for (std::size_t p = 0; p < n; ++p) {
    for (std::size_t q = 0; q < n; ++q) {
      const cplx pxy = px[p] * py[q];
      const std::size_t row = (p * n + q) * n;
      for (std::size_t r = 0; r < n; ++r) out[row + r] = raw_[row + r] * (pxy * pz[r]);
    }
  }
  transform3d(out, out, n, Direction::Backward);
}

ScalarField Spectrum::translated(const Vec3& v) const {
  ScalarField out(spec_, Space::Position);
  translated_into(v, out.values());
  return out;
}

}  // namespace quadscat::fft
