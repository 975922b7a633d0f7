#pragma once

// Dyadic spatial partition chi_0 = chi, chi_j(x) = chi(2^-j x) - chi(2^{1-j} x),
// with chi the radial quintic smoothstep cutoff (1 on |x| <= 1, 0 on |x| >= 2).

#include <vector>

#include "quadscat/grid.hpp"

namespace quadscat {

class DyadicPartition {
 public:
  explicit DyadicPartition(int levels);

  int levels() const { return levels_; }

  /// chi(r): C^2, monotone nonincreasing in r.
  static double profile(double r);
  /// chi_j(r) for j >= 0.
  static double piece(int j, double r);
  /// sum_{j=0}^{J} chi_j(r) = chi(2^-J r).
  double envelope(double r) const;

 private:
  int levels_;
};

/// Pieces chi_j f for j = 0 .. J.
std::vector<ScalarField> dyadic_decompose(const ScalarField& f, int levels);

/// (sum_j 2^{2 rho j} ||chi_j f||^2)^{1/2} over j = 0 .. J.
double dyadic_norm(const ScalarField& f, double rho, int levels);

/// chi(2^-J x) f.
ScalarField dyadic_envelope(const ScalarField& f, int levels);

}  // namespace quadscat
