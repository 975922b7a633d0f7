#pragma once

// Fields on R^3 x [0, T] sampled at t_k = k * dt.

#include <cstddef>
#include <vector>

#include "quadscat/grid.hpp"

namespace quadscat {

struct SobolevIndex {
  double a = 0.0;  ///< spatial weight exponent (<x>^a)
  double b = 0.0;  ///< derivative exponent (<D>^b)
};

/// How samples on t >= 0 extend to the whole line when measuring norms.
enum class TimeExtension {
  Odd,       ///< u(x, -t) = -u(x, t), e.g. A(f, g) and S(f, g)
  Even,      ///< u(x, -t) = u(x, t)
  HalfLine,  ///< u = 0 for t < 0, e.g. Ku = Y_+(t) cos(t|D|) u
};

class SpaceTimeField {
 public:
  SpaceTimeField(GridSpec spec, double dt);

  const GridSpec& spec() const { return spec_; }
  double dt() const { return dt_; }
  double t(std::size_t k) const { return static_cast<double>(k) * dt_; }
  std::size_t size() const { return slices_.size(); }
  bool empty() const { return slices_.empty(); }

  /// Appends the slice for the next time node; must be a position field on spec().
  void push_back(ScalarField slice);
  const ScalarField& slice(std::size_t k) const { return slices_.at(k); }
  ScalarField& slice(std::size_t k) { return slices_.at(k); }
  const std::vector<ScalarField>& slices() const { return slices_; }

  SpaceTimeField& operator+=(const SpaceTimeField& other);
  SpaceTimeField& operator*=(cplx c);

 private:
  GridSpec spec_;
  double dt_;
  std::vector<ScalarField> slices_;
};

/// ||<x,t>^a <D_{x,t}>^b u||_{L^2(R^4)} with the given extension to t < 0.
/// b != 0 requires an Odd or Even extension (periodized over 2K samples).
double spacetime_sobolev_norm(const SpaceTimeField& u, SobolevIndex idx, TimeExtension ext);

inline double spacetime_l2_norm(const SpaceTimeField& u, TimeExtension ext) {
  return spacetime_sobolev_norm(u, {0.0, 0.0}, ext);
}

}  // namespace quadscat
