#pragma once

// Named numerical checks grouped into suites.  Every check reports a
// nonnegative discrepancy `measured` and passes when measured <= tolerance.
// Tolerances come from a fixed registry and may be overridden by name.

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "quadscat/grid.hpp"

namespace quadscat {

struct Check {
  std::string name;
  double measured = 0.0;
  double tolerance = 0.0;
  bool pass = false;
  std::string note;
};

enum class Suite {
  Identities,   ///< exact and round-off identities on the default grid
  Kernels,      ///< one-dimensional kernel oracles
  CrossChecks,  ///< A, B_2 and Q by independent routes and refinement
  Structure,    ///< symmetry, equivariance, support and radiality of B_2
  Probes,       ///< slopes of estimate probes
  Dyadic,       ///< dyadic partition and cross-piece decay
};

std::string to_string(Suite suite);
Suite suite_from_string(const std::string& text);
const std::vector<Suite>& all_suites();

struct CheckConfig {
  std::size_t N = 48;
  double L = 12.0;
  int sphere_degree = 14;
  std::size_t K = 20;
  std::uint64_t seed = 0;
  std::string sphere_file;  ///< node file; built-in rule when empty
  std::map<std::string, double> tolerances;  ///< overrides by check name
};

/// Check name -> default tolerance.
const std::map<std::string, double>& default_tolerances();

/// Throws std::invalid_argument on odd or small N, L <= 0, unknown
/// tolerance names or negative tolerances.
void validate(const CheckConfig& config);

std::vector<Check> run_suite(Suite suite, const CheckConfig& config, Diagnostics* diag = nullptr);

bool all_pass(const std::vector<Check>& checks);

}  // namespace quadscat
