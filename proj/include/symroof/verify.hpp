#pragma once
// Self-check suites wiring every layer together: named invariant checks with
// deterministic seeded budgets. Fast keeps reduced sample counts for quick
// turnaround; Full runs the budgets used by the acceptance gates.

#include <cstdint>
#include <string>
#include <vector>

namespace symroof::verify {

enum class Suite { Fast, Full };

struct CheckResult {
  std::string name;
  bool passed = false;
  std::string detail;  // deterministic given the seed
};

struct Report {
  Suite suite = Suite::Fast;
  std::uint64_t seed = 0;
  std::vector<CheckResult> checks;

  bool allPassed() const;
};

// Runs every check of the suite; never throws on check failure (failures are
// reported), only on internal misuse.
Report run_suite(Suite suite, std::uint64_t seed);

// Fixed-width per-check table plus a trailing summary line; identical for
// identical (suite, seed).
std::string render_table(const Report& report);

}  // namespace symroof::verify
