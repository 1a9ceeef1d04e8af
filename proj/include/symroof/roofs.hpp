#pragma once
// Closed-form fiber minima and convex roofs of monotones on the symmetric
// families, 1-D lower convex envelopes, membership of two-parameter points in
// single-family orbit hulls, and explicit unitary certificates for that
// membership.

#include "symroof/families.hpp"
#include "symroof/monotones.hpp"
#include "symroof/qcore.hpp"

#include <functional>
#include <string>
#include <utility>
#include <vector>

namespace symroof::roofs {

using families::FamilyPoint;
using monotones::MonotoneSpec;
using qcore::PureState;
using qcore::SchmidtVector;
using qcore::SymmetricOperator;
using qcore::Unitary;

// Piecewise-linear lower convex hull of 1-D samples. Interpolates linearly
// between hull vertices; defined on [minX, maxX].
class EnvelopeFunction {
 public:
  double eval(double x) const;
  double minX() const { return xs_.front(); }
  double maxX() const { return xs_.back(); }
  // Hull vertices, a subsequence of the input samples.
  const std::vector<double>& vertexX() const { return xs_; }
  const std::vector<double>& vertexY() const { return ys_; }

 private:
  friend EnvelopeFunction convex_envelope_1d(const std::vector<std::pair<double, double>>&);
  EnvelopeFunction(std::vector<double> xs, std::vector<double> ys);

  std::vector<double> xs_;
  std::vector<double> ys_;
};

// Monotone-chain lower hull. Requires >= 2 samples with strictly increasing x.
EnvelopeFunction convex_envelope_1d(const std::vector<std::pair<double, double>>& samples);

// Shapes of the optimal fiber vectors. WernerPsi lives on the <W_-> = a fiber
// (two Schmidt coefficients); the Iso* kinds live on the sum sqrt(lambda) =
// sqrt(d b) fiber. IsoTwoLevel is (t x k, (1-kt)/(d-k) x (d-k)); IsoTopHeavy
// is its k = 1 case kept as a distinct tag; IsoTruncated is
// (t x k, 1-kt, 0 x (d-k-1)).
enum class ProfileKind { WernerPsi, IsoTwoLevel, IsoTopHeavy, IsoTruncated };

class MinimizerProfile {
 public:
  static MinimizerProfile wernerPsi(double a);
  static MinimizerProfile isoTwoLevel(double t, int k, int d);
  static MinimizerProfile isoTopHeavy(double t, int d);
  static MinimizerProfile isoTruncated(double t, int k, int d);

  ProfileKind kind() const { return kind_; }
  double a() const { return a_; }
  double t() const { return t_; }
  int k() const { return k_; }
  const SchmidtVector& schmidt() const { return schmidt_; }
  // Fiber coordinate: a for WernerPsi, (sum sqrt(lambda))^2 / d for iso kinds.
  double fiberCoordinate() const;
  // Explicit state in C^d tensor C^d. WernerPsi embeds the two-mode state for
  // any d >= 2; iso kinds require d equal to the stored dimension.
  PureState state(int d) const;
  std::string describe() const;

 private:
  MinimizerProfile(ProfileKind kind, double a, double t, int k, SchmidtVector schmidt);

  ProfileKind kind_;
  double a_;
  double t_;
  int k_;
  SchmidtVector schmidt_;
};

// Optimal fiber vector for any monotone at <W_-> = a: a product state for
// a <= 1/2, else the two-mode state with lambda = 1/2 +- sqrt(a(1-a)).
MinimizerProfile werner_minimizer(double a);

// Monotone evaluated on werner_minimizer(a), zero-padded to d entries so
// dimension-normalized monotones see the ambient dimension.
double werner_fiber_value(const MonotoneSpec& spec, double a, int d = 2);

// Convex roof on the Werner family at <W_-> = a. Closed-form fast paths:
// entropy of entanglement, Vidal, Renyi outside [1/2, 1); everything else
// falls back to the sampled envelope.
double roof_werner(const MonotoneSpec& spec, double a, int d = 2);
// Envelope construction bypassing every fast path (cross-check and fallback).
double roof_werner_via_envelope(const MonotoneSpec& spec, double a, int d = 2,
                                int gridPoints = 2001);

// Roof of the k-th Vidal monotone on isotropic states:
// 0 for b <= k/d or k >= d, else (1/d)(sqrt((1-b)k) - sqrt(b(d-k)))^2.
double iso_vidal_roof(int k, double b, int d);
// Two-level profile attaining it; requires 1 <= k < d and b in [k/d, 1].
MinimizerProfile iso_vidal_minimizer(int k, double b, int d);

// Schmidt vector whose tail sums reproduce every iso Vidal roof at b; its
// monotone value lower-bounds the isotropic roof but the vector itself is
// generally off the fiber for d >= 3.
SchmidtVector iso_lambda_beta(double b, int d);
double iso_lower_bound_roof(const MonotoneSpec& spec, double b, int d);

// Summand of a sum-form entropy H_f = sum_i f(lambda_i), with derivative.
// Requires f(0) = 0 and f' continuous on (0, 1).
struct ScalarEntropy {
  std::function<double(double)> f;
  std::function<double(double)> fprime;
};

enum class BerryRegime { Concave, Convex };

// Samples second differences of x -> fprime(1 / (4 x^2)) at 512 points on
// (1e-4, 1/2). Mixed signs beyond 1e-9 throw; an everywhere-flat profile
// classifies as Concave (both candidate minimizers then agree).
BerryRegime classify_entropy_regime(const std::function<double(double)>& fprime);

struct EntropyMinimum {
  double value;
  MinimizerProfile profile;
};

// Minimum of H_f on the isotropic fiber at coordinate b in [1/d, 1]:
// Concave regime -> top-heavy profile, value f(t) + (d-1) f((1-t)/(d-1));
// Convex regime -> truncated profile with k = floor(d b), value
// k f(t) + f(1 - k t).
EntropyMinimum iso_entropy_minimum(const ScalarEntropy& f, double b, int d);

// t parameters of the two candidate profiles. The truncated variant returns
// (t, k); b within 1e-9 of a multiple of 1/d rounds k to avoid floor flicker.
double iso_t_topheavy(double b, int d);
std::pair<double, int> iso_t_truncated(double b, int d);

// Fiber minimum of an arbitrary monotone on the isotropic fiber, b in [1/d, 1].
// Concurrence is supported for k = 2 and k = d only; generalized entropies
// need a derivative handle.
EntropyMinimum iso_fiber_minimum(const MonotoneSpec& spec, double b, int d);

// Concurrence fiber-minimum curves (concave in b) and their linear roofs.
double iso_c2_preenvelope(double b, int d);   // b in [1/d, 1]
double iso_cd_preenvelope(double b, int d);   // b in [1 - 1/d, 1]
double iso_c2_roof(double b, int d);          // 0 for b <= 1/d, else (db-1)/(d-1)
double iso_cd_roof(double b, int d);          // 0 for b <= 1-1/d, else db-d+1

struct RoofResult {
  double value;           // convex roof at the point
  double fiber_minimum;   // fiber-minimum curve at the same coordinate
  MinimizerProfile profile;
  bool via_continuity;    // off-axis value where the envelope sits strictly
                          // below the curve; needs a continuous monotone
};

// Convex roof on the isotropic family at coordinate b (any b in [0, 1]).
RoofResult iso_roof(const MonotoneSpec& spec, double b, int d);

enum class Region { WernerOrbitRegion, IsoOrbitRegion, Unknown };

// Orbit-hull membership of a family point. Single-parameter points classify
// as their own family's region. PPWerner joins the Werner region iff
// a >= 1/2; PPIsotropic joins the isotropic region iff b >= 1/d; OO joins
// Werner iff a >= 1/2 and b <= 2(1-a)/d, isotropic iff b >= 1/d and
// a <= d(1-b)/(2(d-1)); everything else is Unknown.
Region region_membership(const FamilyPoint& point);

// Convex roof at any point of a covered region: the 1-D roof at the point's
// invariant coordinate. Off-axis points where that roof sits strictly below
// the fiber-minimum curve are flagged via_continuity and require a
// continuous monotone. Unknown regions throw.
RoofResult extended_roof(const MonotoneSpec& spec, const FamilyPoint& point);

struct CertificateCheck {
  SymmetricOperator op;
  double predicted;
  double achieved;
};

struct CertificateEntry {
  std::string label;
  Unitary unitary;        // left local factor
  bool conjugateRight;    // true: U tensor conj(U); false: U tensor U
  std::vector<CertificateCheck> checks;
};

// Explicit local unitaries mapping the profile state onto orbit members whose
// twirls hit the boundary points of the covered region; checked by
// recomputing every expectation.
struct OrbitCertificate {
  std::vector<CertificateEntry> entries;
  double maxError;        // max |predicted - achieved|
  bool verified;          // maxError <= 1e-10
};

OrbitCertificate orbit_membership_certificate(const FamilyPoint& point,
                                              const MinimizerProfile& profile);

}  // namespace symroof::roofs
