#pragma once

// One-dimensional Gauss-Legendre rules.

#include <cstddef>
#include <vector>

namespace quadscat {

struct GaussRule {
  std::vector<double> nodes;    ///< ascending, in (-1, 1)
  std::vector<double> weights;  ///< positive, summing to 2
};

/// n-point Gauss-Legendre rule on [-1, 1] (exact for degree 2n - 1).
/// Nodes are exactly antisymmetric: nodes[n-1-i] == -nodes[i].
GaussRule gauss_legendre(std::size_t n);

/// Composite Gauss-Legendre integral of fn over [a, b] with `panels` equal panels.
template <class Fn>
double integrate_gl(Fn&& fn, double a, double b, const GaussRule& rule, std::size_t panels = 1) {
  if (!(b > a)) return 0.0;
  const double width = (b - a) / static_cast<double>(panels);
  double acc = 0.0;
  for (std::size_t p = 0; p < panels; ++p) {
    const double lo = a + static_cast<double>(p) * width;
    const double mid = lo + 0.5 * width;
    double panel = 0.0;
    for (std::size_t i = 0; i < rule.nodes.size(); ++i) panel += rule.weights[i] * fn(mid + 0.5 * width * rule.nodes[i]);
    acc += 0.5 * width * panel;
  }
  return acc;
}

}  // namespace quadscat
