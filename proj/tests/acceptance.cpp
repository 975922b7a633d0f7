// Acceptance run: one line per criterion, each backed by a check suite and
// a wall-clock budget.  Optional arguments select criteria by number.

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <iostream>
#include <set>
#include <string>

#include "quadscat/checks.hpp"

using namespace quadscat;

namespace {

struct Criterion {
  int id;
  Suite suite;
  const char* title;
  double budget_s;  // 0: no runtime bound
};

const Criterion kCriteria[] = {
    {1, Suite::Identities, "identity suite", 300.0},
    {2, Suite::Kernels, "kernel oracles", 30.0},
    {3, Suite::CrossChecks, "A/B2/Q cross-checks", 1200.0},
    {4, Suite::Structure, "structural properties of B2", 0.0},
    {5, Suite::Probes, "estimate probes", 1800.0},
    {6, Suite::Dyadic, "dyadic machinery", 0.0},
};

}  // namespace

int main(int argc, char** argv) {
  std::set<int> wanted;
  for (int i = 1; i < argc; ++i) wanted.insert(std::atoi(argv[i]));

  CheckConfig config;  // N=48, L=12, degree 14, K=20
  bool all_ok = true;
  for (const auto& c : kCriteria) {
    if (!wanted.empty() && !wanted.count(c.id)) continue;
    Diagnostics diag;
    const auto start = std::chrono::steady_clock::now();
    const auto checks = run_suite(c.suite, config, &diag);
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    for (const auto& k : checks) {
      if (!k.pass) std::printf("    failed %s: measured %.3e tol %.3e\n", k.name.c_str(), k.measured, k.tolerance);
    }
    const bool in_budget = c.budget_s <= 0.0 || secs <= c.budget_s;
    const bool ok = all_pass(checks) && in_budget;
    all_ok = all_ok && ok;
    std::printf("criterion %d: %s  %-28s %zu checks, %.1f s", c.id, ok ? "PASS" : "FAIL", c.title, checks.size(), secs);
    if (c.budget_s > 0.0) std::printf(" (budget %.0f s)", c.budget_s);
    std::printf("\n");
    std::fflush(stdout);
  }
  return all_ok ? 0 : 1;
}
