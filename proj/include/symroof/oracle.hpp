#pragma once
// Brute-force numerical estimates used to verify the closed forms from the
// outside: fiber minimization of monotones, decomposition searches that upper
// bound convex roofs, and a random-search check of the conversion-witness
// optimum. Estimates are bounds, never proofs.

#include "symroof/families.hpp"
#include "symroof/monotones.hpp"
#include "symroof/qcore.hpp"

#include <cstdint>
#include <optional>
#include <vector>

namespace symroof::oracle {

using families::FamilyPoint;
using monotones::MonotoneSpec;
using qcore::SchmidtVector;

// Deterministic multi-start budget: restart r uses the stream split(seed, r).
struct SearchBudget {
  int restarts = 64;
  int iterations = 2000;
  std::uint64_t seed = 0x5eedba5eULL;
  double initialStep = 0.25;
  double stepDecay = 0.5;
  int decayInterval = 50;  // consecutive non-improving iterations per decay
};

struct OracleEstimate {
  double value = 0.0;
  std::vector<double> argmin;             // Schmidt vector, descending
  std::optional<double> gapToClosedForm;  // |value - closedForm| when supplied
  int restartsUsed = 0;
};

// Minimum of spec over Schmidt vectors with sum sqrt(lambda) = sqrt(d b),
// b in [1/d, 1]: projected subgradient descent with line search in the
// x = sqrt(lambda) sphere-plane coordinates, multi-start. Upper bound on the
// true fiber minimum.
OracleEstimate min_on_iso_fiber(const MonotoneSpec& spec, double b, int d,
                                const SearchBudget& budget = {},
                                std::optional<double> closedForm = std::nullopt);

// Minimum of spec over pure states with <W_-> = a: stochastic descent over
// unit symmetric and antisymmetric components mixed with weights sqrt(1-a),
// sqrt(a).
OracleEstimate min_on_werner_fiber(const MonotoneSpec& spec, double a, int d,
                                   const SearchBudget& budget = {},
                                   std::optional<double> closedForm = std::nullopt);

struct EnsembleMember {
  double weight;
  SchmidtVector schmidt;
  double fiberCoordinate;  // <W_-> for Werner-side families, <Phi_d> for isotropic
};

struct DecompositionEstimate {
  double value = 0.0;
  std::vector<EnsembleMember> ensemble;
  std::optional<double> gapToClosedForm;
  int restartsUsed = 0;
};

// Best ensemble-average entanglement over pure-state decompositions of the
// family density matrix: random isometry extensions of the eigendecomposition
// refined by two-member unitary rotations with line search on the angle.
// Valid upper bound on the convex roof. ensembleSize 0 means twice the rank;
// explicit sizes below the rank are rejected.
DecompositionEstimate roof_upper_bound_by_decompositions(
    const FamilyPoint& point, const MonotoneSpec& spec, int ensembleSize = 0,
    const SearchBudget& budget = {}, std::optional<double> closedForm = std::nullopt);

// Direct multi-start maximization of min_k [prefix_k(mu) - prefix_k(lambda)]
// over the fiber sum sqrt(mu) = sqrt(d b), without the per-k decomposition.
// Lower bound on the conversion-witness value.
OracleEstimate witness_oracle(const SchmidtVector& lambda, double b, int d,
                              const SearchBudget& budget = {},
                              std::optional<double> closedForm = std::nullopt);

}  // namespace symroof::oracle
