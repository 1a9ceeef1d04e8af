#pragma once
// LOCC conversion witnesses for a pure source state with Schmidt vector
// lambda: a complete witness for two-qubit mixed targets, a complete witness
// for Werner targets, and a necessary-only (no-go) witness for isotropic
// targets built from per-k constrained maximizations over the target fiber.

#include "symroof/qcore.hpp"

#include <cstdint>
#include <vector>

namespace symroof::witness {

using qcore::DensityMatrix;
using qcore::SchmidtVector;

enum class Verdict { Go, NoGo, Inconclusive };

// One constrained subproblem of the isotropic witness: the maximum of
// f_k(mu) = prefix_k(mu) - prefix_k(lambda) over the fiber points whose
// smallest prefix gap is attained at k. Infeasible means that region of the
// fiber is empty and the subproblem is excluded from the reduction.
struct SubproblemReport {
  int k = 0;
  bool feasible = false;
  double optimum = 0.0;
  double kktResidual = 0.0;
  double maxViolation = 0.0;
};

struct SolverDiagnostics {
  double kktResidual = 0.0;       // worst feasible subproblem
  double maxViolation = 0.0;      // worst feasible subproblem
  double subproblemSpread = 0.0;  // max - min over feasible optima
  int restartsUsed = 0;
  bool onBoundary = false;        // |value| inside the decision band 1e-8
};

// value semantics: the witness margin. Complete witnesses (two-qubit and
// Werner targets): value >= 0 iff conversion is possible, verdict Go/NoGo.
// Isotropic targets: value < -1e-8 proves impossibility (NoGo); otherwise the
// witness is silent (Inconclusive), never Go, except for the separable-target
// shortcut b < 1/d.
struct WitnessResult {
  double value = 0.0;
  Verdict verdict = Verdict::Inconclusive;
  std::vector<SubproblemReport> perK;
  SolverDiagnostics diagnostics;
};

struct WitnessBudget {
  int restarts = 32;   // multi-starts per subproblem, structured then random
  int iterations = 300;
  std::uint64_t seed = 0xd15c0b5eULL;
};

// Two-qubit mixed-state concurrence from the spin-flip spectrum: eigenvalues
// nu of rho (sy x sy) conj(rho) (sy x sy), C = max(0, sqrt(nu1) - sqrt(nu2) -
// sqrt(nu3) - sqrt(nu4)). Imported textbook construction, stated here without
// derivation.
double wootters_concurrence(const DensityMatrix& rho);

// Complete witness for conversion into a two-qubit mixed state: compares the
// source tail E1 = 1 - lambda_1 with the target roof (1 - sqrt(1 - C^2))/2.
// Go iff value >= -1e-10.
WitnessResult pure_to_two_qubit(const SchmidtVector& lambda, const DensityMatrix& rho);

// Complete witness for conversion into the Werner state with coordinate a.
// Separable targets (a <= 1/2) convert unconditionally (threshold 1); else
// Go iff lambda_1 <= 1/2 + sqrt(a(1-a)) + 1e-12. value = threshold - lambda_1.
WitnessResult pure_to_werner(const SchmidtVector& lambda, double a);

// No-go witness for conversion into the isotropic state with coordinate b on
// C^d tensor C^d: the maximum over the target fiber of the smallest prefix
// gap min_k [prefix_k(mu) - prefix_k(lambda)], k < d, computed by splitting
// the fiber into the per-k regions {f_k <= f_l for all l} and solving each
// region by projected-gradient ascent with active-set constraint handling.
// lambda may have fewer than d entries (padded with zeros), never more.
// NoGo iff value < -1e-8, else Inconclusive; b < 1/d returns the trivial Go.
WitnessResult pure_to_isotropic_nogo(const SchmidtVector& lambda, double b, int d,
                                     const WitnessBudget& budget = {});

}  // namespace symroof::witness
