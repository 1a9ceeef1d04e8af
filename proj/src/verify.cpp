#include "symroof/verify.hpp"

#include "symroof/families.hpp"
#include "symroof/monotones.hpp"
#include "symroof/oracle.hpp"
#include "symroof/output.hpp"
#include "symroof/qcore.hpp"
#include "symroof/roofs.hpp"
#include "symroof/witness.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <functional>
#include <sstream>
#include <vector>

namespace symroof::verify {
namespace {

using families::Family;
using families::FamilyPoint;
using monotones::MonotoneSpec;
using qcore::DensityMatrix;
using qcore::Matrix;
using qcore::PureState;
using qcore::Rng;
using qcore::SchmidtVector;

struct Ctx {
  Suite suite;
  Rng rng;  // per-check stream
  bool fast() const { return suite == Suite::Fast; }
};

std::string fmt(const char* pattern, double x) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), pattern, x);
  return buf;
}

std::vector<double> grid(double lo, double hi, int n) {
  std::vector<double> g(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i)
    g[static_cast<std::size_t>(i)] = n == 1 ? lo : lo + (hi - lo) * i / (n - 1);
  return g;
}

double binary_entropy(double p) {
  double h = 0.0;
  if (p > 0.0) h -= p * std::log2(p);
  if (p < 1.0) h -= (1.0 - p) * std::log2(1.0 - p);
  return h;
}

// Signed second-difference extremum: most negative for convexity checks
// (sign +1), most positive for concavity checks (sign -1).
double worst_second_difference(const std::vector<double>& v, int sign) {
  double worst = 0.0;
  for (std::size_t i = 1; i + 1 < v.size(); ++i) {
    const double d2 = sign * (v[i + 1] - 2.0 * v[i] + v[i - 1]);
    worst = std::min(worst, d2);
  }
  return -worst;  // >= 0; how far the wrong way the curve bends
}

DensityMatrix random_density(int d, Rng& rng, int mixture = 3) {
  Matrix rho = Matrix::Zero(d * d, d * d);
  std::vector<double> w(static_cast<std::size_t>(mixture));
  double total = 0.0;
  for (double& x : w) {
    x = rng.uniform() + 1e-3;
    total += x;
  }
  for (int i = 0; i < mixture; ++i) {
    const PureState psi = PureState::haarRandom(d, d, rng);
    rho += (w[static_cast<std::size_t>(i)] / total) *
           (psi.amplitudes() * psi.amplitudes().adjoint());
  }
  return DensityMatrix(rho, d, d);
}

SchmidtVector random_schmidt(int d, Rng& rng) {
  std::vector<double> mu(static_cast<std::size_t>(d));
  for (double& x : mu) {
    const double g = rng.gaussian();
    x = g * g;
  }
  return SchmidtVector::normalized(std::move(mu));
}

CheckResult check_schmidt_reconstruction(Ctx ctx) {
  const int perDim = ctx.fast() ? 10 : 40;
  double worst = 0.0;
  for (int d = 2; d <= 5; ++d)
    for (int trial = 0; trial < perDim; ++trial) {
      const PureState psi = PureState::haarRandom(d, d, ctx.rng);
      const qcore::SchmidtDecomposition sd = qcore::schmidt_decompose(psi);
      qcore::Vector rebuilt = qcore::Vector::Zero(d * d);
      for (int r = 0; r < d; ++r) {
        const double c = std::sqrt(sd.lambda[r]);
        for (int i = 0; i < d; ++i)
          for (int j = 0; j < d; ++j)
            rebuilt(i * d + j) +=
                c * sd.localUnitaryLeft(i, r) * sd.localUnitaryRight(j, r);
      }
      worst = std::max(worst, (rebuilt - psi.amplitudes()).norm());
    }
  return {"schmidt-reconstruction", worst <= 1e-10,
          "max reconstruction error " + fmt("%.3g", worst)};
}

CheckResult check_family_coordinate_roundtrip(Ctx ctx) {
  (void)ctx;
  double worst = 0.0;
  const int d = 3;
  for (double a : grid(0.0, 1.0, 9)) {
    const FamilyPoint in = FamilyPoint::werner(a, d);
    const FamilyPoint back = families::twirl(families::family_to_density(in), Family::Werner);
    worst = std::max(worst, std::abs(back.a - a));
  }
  for (double b : grid(0.0, 1.0, 9)) {
    const FamilyPoint in = FamilyPoint::isotropic(b, d);
    const FamilyPoint back =
        families::twirl(families::family_to_density(in), Family::Isotropic);
    worst = std::max(worst, std::abs(back.b - b));
  }
  for (double a : grid(0.0, 0.6, 4))
    for (double b : grid(0.0, 0.35, 4)) {
      const FamilyPoint in = FamilyPoint::oo(a, b, d);
      const FamilyPoint back = families::twirl(families::family_to_density(in), Family::OO);
      worst = std::max(worst, std::max(std::abs(back.a - a), std::abs(back.b - b)));
      const FamilyPoint inW = FamilyPoint::ppWerner(a, b, d);
      const FamilyPoint backW =
          families::twirl(families::family_to_density(inW), Family::PPWerner);
      worst = std::max(worst, std::max(std::abs(backW.a - a), std::abs(backW.b - b)));
      const FamilyPoint inI = FamilyPoint::ppIsotropic(a, b, d);
      const FamilyPoint backI =
          families::twirl(families::family_to_density(inI), Family::PPIsotropic);
      worst = std::max(worst, std::max(std::abs(backI.a - a), std::abs(backI.b - b)));
    }
  return {"family-coordinate-roundtrip", worst <= 1e-12,
          "max coordinate error " + fmt("%.3g", worst)};
}

CheckResult check_twirl_idempotence(Ctx ctx) {
  double worst = 0.0;
  const int d = 3;
  for (Family family : {Family::Werner, Family::Isotropic, Family::OO,
                        Family::PPWerner, Family::PPIsotropic}) {
    DensityMatrix rho = random_density(d, ctx.rng);
    const DensityMatrix once = families::twirl_to_density(rho, family);
    const DensityMatrix twice = families::twirl_to_density(once, family);
    worst = std::max(worst,
                     (twice.matrix() - once.matrix()).cwiseAbs().maxCoeff());
  }
  return {"twirl-idempotence", worst <= 1e-12, "max drift " + fmt("%.3g", worst)};
}

CheckResult check_twirl_monte_carlo(Ctx ctx) {
  const int samples = ctx.fast() ? 1500 : 10000;
  const int states = ctx.fast() ? 2 : 4;
  const int d = 3;
  double worst = 0.0;
  const std::vector<Family> fams =
      ctx.fast() ? std::vector<Family>{Family::Werner, Family::Isotropic}
                 : std::vector<Family>{Family::Werner, Family::Isotropic, Family::OO,
                                       Family::PPWerner};
  for (Family family : fams)
    for (int t = 0; t < states; ++t) {
      const DensityMatrix rho = random_density(d, ctx.rng);
      Matrix avg = Matrix::Zero(d * d, d * d);
      for (int n = 0; n < samples; ++n) {
        const families::GroupElement g = families::sample_group_element(family, d, ctx.rng);
        avg += families::conjugate_local(rho.matrix(), g.left, g.right);
      }
      avg /= samples;
      const Matrix exact = families::twirl_to_density(rho, family).matrix();
      worst = std::max(worst, (avg - exact).cwiseAbs().maxCoeff());
    }
  return {"twirl-monte-carlo", worst <= 5e-2,
          "max entry deviation " + fmt("%.3g", worst) + " at " +
              std::to_string(samples) + " samples"};
}

CheckResult check_werner_fiber_bound(Ctx ctx) {
  const int samples = ctx.fast() ? 200 : 1000;
  const int d = 3;
  double worst = -1.0;  // worst slack violation
  for (double a : {0.0, 0.2, 0.4, 0.6, 0.8, 1.0}) {
    // Product states live on fibers with a <= 1/2, so the cap is 1 there.
    const double bound =
        (a <= 0.5 ? 1.0 : 0.5 + std::sqrt(a * (1.0 - a))) + 1e-9;
    for (int n = 0; n < samples; ++n) {
      const PureState psi = qcore::fiber_state_werner(a, d, ctx.rng);
      const SchmidtVector lambda = qcore::schmidt_decompose(psi).lambda;
      worst = std::max(worst, lambda[0] - bound);
    }
  }
  return {"werner-fiber-top-coefficient", worst <= 0.0,
          "max lambda_1 excess over bound " + fmt("%.3g", worst)};
}

CheckResult check_werner_eof_curve(Ctx ctx) {
  (void)ctx;
  const MonotoneSpec eof = MonotoneSpec::entropyOfEntanglement();
  double worst = 0.0;
  for (double a : grid(0.5, 1.0, 101)) {
    const double expected = binary_entropy(0.5 - std::sqrt(a * (1.0 - a)));
    worst = std::max(worst, std::abs(roofs::roof_werner(eof, a) - expected));
  }
  for (double a : grid(0.0, 0.5, 51))
    worst = std::max(worst, std::abs(roofs::roof_werner(eof, a)));
  return {"werner-eof-curve", worst <= 1e-10, "max error " + fmt("%.3g", worst)};
}

CheckResult check_vidal_werner(Ctx ctx) {
  (void)ctx;
  double worst = 0.0;
  for (int k = 2; k <= 3; ++k) {
    const MonotoneSpec spec = MonotoneSpec::vidal(k);
    for (double a : grid(0.0, 1.0, 101))
      worst = std::max(worst, std::abs(roofs::roof_werner(spec, a, 4)));
  }
  const MonotoneSpec e1 = MonotoneSpec::vidal(1);
  for (double a : grid(0.0, 1.0, 101)) {
    const double expected = std::max(0.0, 0.5 - std::sqrt(a * (1.0 - a)));
    worst = std::max(worst, std::abs(roofs::roof_werner(e1, a) - expected));
  }
  return {"vidal-werner", worst <= 1e-10, "max error " + fmt("%.3g", worst)};
}

CheckResult check_renyi_regimes(Ctx ctx) {
  const int points = ctx.fast() ? 301 : 1001;
  const std::vector<double> convexAlphas =
      ctx.fast() ? std::vector<double>{2.0} : std::vector<double>{1.5, 2.0, 3.0};
  const std::vector<double> concaveAlphas =
      ctx.fast() ? std::vector<double>{0.25} : std::vector<double>{0.1, 0.25, 0.4};
  double worstBend = 0.0;
  for (double alpha : convexAlphas) {
    const MonotoneSpec spec = MonotoneSpec::renyi(alpha);
    std::vector<double> curve;
    for (double a : grid(0.5, 1.0, points))
      curve.push_back(roofs::werner_fiber_value(spec, a));
    worstBend = std::max(worstBend, worst_second_difference(curve, +1));
  }
  for (double alpha : concaveAlphas) {
    const MonotoneSpec spec = MonotoneSpec::renyi(alpha);
    std::vector<double> curve;
    for (double a : grid(0.5, 1.0, points))
      curve.push_back(roofs::werner_fiber_value(spec, a));
    worstBend = std::max(worstBend, worst_second_difference(curve, -1));
  }
  double worstChord = 0.0;
  const MonotoneSpec quarter = MonotoneSpec::renyi(0.25);
  for (double a : grid(0.0, 1.0, ctx.fast() ? 41 : 101)) {
    const double expected = std::max(0.0, 2.0 * a - 1.0);
    worstChord =
        std::max(worstChord, std::abs(roofs::roof_werner_via_envelope(quarter, a) - expected));
  }
  const bool ok = worstBend <= 1e-9 && worstChord <= 1e-6;
  return {"renyi-werner-regimes", ok,
          "max wrong-way bend " + fmt("%.3g", worstBend) + ", max chord error " +
              fmt("%.3g", worstChord)};
}

CheckResult check_concurrence_roofs(Ctx ctx) {
  (void)ctx;
  double worstRoof = 0.0, worstBend = 0.0;
  for (int d = 3; d <= 5; ++d) {
    for (double b : grid(1.0 / d, 1.0, 41)) {
      const double expected = (d * b - 1.0) / (d - 1.0);
      worstRoof = std::max(worstRoof, std::abs(roofs::iso_c2_roof(b, d) - expected));
    }
    for (double b : grid(1.0 - 1.0 / d, 1.0, 41)) {
      const double expected = d * b - d + 1.0;
      worstRoof = std::max(worstRoof, std::abs(roofs::iso_cd_roof(b, d) - expected));
    }
    std::vector<double> c2curve, cdcurve;
    for (double b : grid(1.0 / d, 1.0, 201)) c2curve.push_back(roofs::iso_c2_preenvelope(b, d));
    for (double b : grid(1.0 - 1.0 / d, 1.0, 201))
      cdcurve.push_back(roofs::iso_cd_preenvelope(b, d));
    worstBend = std::max(worstBend, worst_second_difference(c2curve, -1));
    worstBend = std::max(worstBend, worst_second_difference(cdcurve, -1));
  }
  const bool ok = worstRoof <= 1e-10 && worstBend <= 1e-9;
  return {"concurrence-roofs", ok,
          "max roof error " + fmt("%.3g", worstRoof) + ", max convex bend " +
              fmt("%.3g", worstBend)};
}

CheckResult check_vidal_iso_closed_form(Ctx ctx) {
  oracle::SearchBudget budget;
  double tol = 1e-5;
  std::vector<int> dims{3, 4, 5, 6};
  int points = 11;
  if (ctx.fast()) {
    budget.restarts = 12;
    budget.iterations = 600;
    tol = 1e-4;
    dims = {3, 4};
    points = 7;
  }
  budget.seed = ctx.rng.split(17).seed();
  double worstGap = 0.0, worstBoundary = 0.0;
  for (int d : dims)
    for (int k = 1; k < d; ++k) {
      for (double b : grid(1.0 / d, 1.0, points)) {
        const double closed = roofs::iso_vidal_roof(k, b, d);
        const oracle::OracleEstimate est =
            oracle::min_on_iso_fiber(MonotoneSpec::vidal(k), b, d, budget, closed);
        worstGap = std::max(worstGap, est.gapToClosedForm.value());
      }
      worstBoundary = std::max(
          worstBoundary, std::abs(roofs::iso_vidal_roof(k, static_cast<double>(k) / d, d)));
    }
  const bool ok = worstGap <= tol && worstBoundary <= 1e-12;
  return {"vidal-iso-closed-form", ok,
          "max oracle gap " + fmt("%.3g", worstGap) + ", max boundary value " +
              fmt("%.3g", worstBoundary)};
}

CheckResult check_iso_lower_bound(Ctx ctx) {
  (void)ctx;
  double worstExcess = -1.0, worstD2 = 0.0;
  for (int d = 2; d <= 4; ++d)
    for (int k = 1; k < d; ++k) {
      const MonotoneSpec spec = MonotoneSpec::vidal(k);
      for (double b : grid(1.0 / d, 1.0, 21)) {
        const double lower = roofs::iso_lower_bound_roof(spec, b, d);
        const double roof = roofs::iso_vidal_roof(k, b, d);
        worstExcess = std::max(worstExcess, lower - roof - 1e-12);
        if (d == 2) worstD2 = std::max(worstD2, std::abs(lower - roof));
      }
    }
  const bool ok = worstExcess <= 0.0 && worstD2 <= 1e-12;
  return {"iso-lower-bound", ok,
          "max excess over roof " + fmt("%.3g", worstExcess) + ", max d=2 gap " +
              fmt("%.3g", worstD2)};
}

CheckResult check_orbit_certificates(Ctx ctx) {
  (void)ctx;
  double worst = 0.0;
  bool allVerified = true;
  for (int d = 2; d <= 6; ++d) {
    for (double a : grid(0.5, 1.0, 6)) {
      const roofs::OrbitCertificate cert = roofs::orbit_membership_certificate(
          FamilyPoint::werner(a, d), roofs::werner_minimizer(a));
      allVerified = allVerified && cert.verified;
      worst = std::max(worst, cert.maxError);
    }
    for (double b : grid(1.0 / d, 1.0, 6)) {
      const FamilyPoint point = FamilyPoint::isotropic(b, d);
      const roofs::OrbitCertificate top = roofs::orbit_membership_certificate(
          point, roofs::iso_fiber_minimum(MonotoneSpec::entropyOfEntanglement(), b, d).profile);
      allVerified = allVerified && top.verified;
      worst = std::max(worst, top.maxError);
      const roofs::OrbitCertificate trunc = roofs::orbit_membership_certificate(
          point, roofs::iso_fiber_minimum(MonotoneSpec::renyi(0.25), b, d).profile);
      allVerified = allVerified && trunc.verified;
      worst = std::max(worst, trunc.maxError);
      for (int k = 1; k < d; ++k) {
        if (b < static_cast<double>(k) / d) continue;
        const roofs::OrbitCertificate two = roofs::orbit_membership_certificate(
            point, roofs::iso_vidal_minimizer(k, b, d));
        allVerified = allVerified && two.verified;
        worst = std::max(worst, two.maxError);
      }
    }
  }
  return {"orbit-certificates", allVerified && worst <= 1e-10,
          "max expectation error " + fmt("%.3g", worst)};
}

CheckResult check_extended_roof_constancy(Ctx ctx) {
  (void)ctx;
  const MonotoneSpec eof = MonotoneSpec::entropyOfEntanglement();
  const int d = 3;
  double worst = 0.0;
  {
    const double a = 0.8;
    const double reference = roofs::roof_werner(eof, a, d);
    const double bMax = 2.0 * (1.0 - a) / d;
    for (double b : grid(0.0, bMax, 5))
      worst = std::max(worst,
                       std::abs(roofs::extended_roof(eof, FamilyPoint::oo(a, b, d)).value -
                                reference));
    for (double b : grid(0.0, 1.0 - a, 5))
      worst = std::max(
          worst, std::abs(roofs::extended_roof(eof, FamilyPoint::ppWerner(a, b, d)).value -
                          reference));
  }
  {
    const double b = 0.8;
    const double reference = roofs::iso_roof(eof, b, d).value;
    const double aMax = d * (1.0 - b) / (2.0 * (d - 1.0));
    for (double a : grid(0.0, aMax, 5))
      worst = std::max(worst,
                       std::abs(roofs::extended_roof(eof, FamilyPoint::oo(a, b, d)).value -
                                reference));
    for (double a : grid(0.0, 1.0 - b, 5))
      worst = std::max(
          worst, std::abs(roofs::extended_roof(eof, FamilyPoint::ppIsotropic(a, b, d)).value -
                          reference));
  }
  return {"extended-roof-constancy", worst <= 1e-12,
          "max variation along fibers " + fmt("%.3g", worst)};
}

CheckResult check_witness_werner_majorization(Ctx ctx) {
  const int pairs = ctx.fast() ? 150 : 500;
  int mismatches = 0;
  for (int n = 0; n < pairs; ++n) {
    const int d = 2 + static_cast<int>(ctx.rng.uniformInt(3));
    const SchmidtVector lambda = random_schmidt(d, ctx.rng);
    const double a = 0.5 + 0.5 * ctx.rng.uniform();
    const double h = std::sqrt(a * (1.0 - a));
    const SchmidtVector target({0.5 + h, 0.5 - h});
    const bool go = witness::pure_to_werner(lambda, a).verdict == witness::Verdict::Go;
    const bool maj = qcore::majorizes(target, lambda);
    if (go != maj) ++mismatches;
  }
  return {"witness-werner-majorization", mismatches == 0,
          std::to_string(mismatches) + " verdict mismatches in " + std::to_string(pairs) +
              " pairs"};
}

CheckResult check_witness_d2_closed_form(Ctx ctx) {
  witness::WitnessBudget budget;
  budget.seed = ctx.rng.split(3).seed();
  if (ctx.fast()) budget.restarts = 12;
  double worst = 0.0;
  for (int n = 0; n < (ctx.fast() ? 6 : 20); ++n) {
    const SchmidtVector lambda = random_schmidt(2, ctx.rng);
    for (double b : grid(0.5, 1.0, 9)) {
      const double expected = (1.0 - lambda[0]) - roofs::iso_vidal_roof(1, b, 2);
      const witness::WitnessResult res = witness::pure_to_isotropic_nogo(lambda, b, 2, budget);
      worst = std::max(worst, std::abs(res.value - expected));
    }
  }
  return {"witness-d2-closed-form", worst <= 1e-8, "max error " + fmt("%.3g", worst)};
}

CheckResult check_witness_solver_vs_oracle(Ctx ctx) {
  witness::WitnessBudget solverBudget;
  solverBudget.seed = ctx.rng.split(5).seed();
  oracle::SearchBudget oracleBudget;
  oracleBudget.seed = ctx.rng.split(6).seed();
  if (ctx.fast()) {
    solverBudget.restarts = 16;
    oracleBudget.restarts = 24;
    oracleBudget.iterations = 800;
  }
  const SchmidtVector lambda({0.6, 0.3, 0.1});
  const std::vector<double> bs =
      ctx.fast() ? std::vector<double>{0.5, 0.8, 0.95} : grid(1.0 / 3.0, 1.0, 11);
  double worstGap = 0.0, worstUndercut = -1.0, worstSpread = 0.0, worstViolation = 0.0;
  for (double b : bs) {
    const witness::WitnessResult res = witness::pure_to_isotropic_nogo(lambda, b, 3, solverBudget);
    const oracle::OracleEstimate est = oracle::witness_oracle(lambda, b, 3, oracleBudget);
    worstGap = std::max(worstGap, std::abs(res.value - est.value));
    worstUndercut = std::max(worstUndercut, est.value - res.value - 1e-6);
    worstSpread = std::max(worstSpread, res.diagnostics.subproblemSpread);
    worstViolation = std::max(worstViolation, res.diagnostics.maxViolation);
  }
  const bool ok =
      worstGap <= 1e-4 && worstUndercut <= 0.0 && worstSpread <= 1e-6 && worstViolation <= 1e-8;
  return {"witness-solver-vs-oracle", ok,
          "max |solver-oracle| " + fmt("%.3g", worstGap) + ", spread " +
              fmt("%.3g", worstSpread) + ", violation " + fmt("%.3g", worstViolation)};
}

CheckResult check_witness_monotone_in_b(Ctx ctx) {
  witness::WitnessBudget budget;
  budget.seed = ctx.rng.split(7).seed();
  if (ctx.fast()) budget.restarts = 16;
  double worstIncrease = 0.0;
  const std::vector<SchmidtVector> lambdas{SchmidtVector({0.6, 0.3, 0.1}),
                                           random_schmidt(3, ctx.rng)};
  for (const SchmidtVector& lambda : lambdas) {
    double prev = 0.0;
    bool first = true;
    for (double b : grid(1.0 / 3.0, 1.0, ctx.fast() ? 7 : 11)) {
      const double value = witness::pure_to_isotropic_nogo(lambda, b, 3, budget).value;
      if (!first) worstIncrease = std::max(worstIncrease, value - prev);
      prev = value;
      first = false;
    }
  }
  return {"witness-monotone-in-b", worstIncrease <= 1e-8,
          "max increase along b " + fmt("%.3g", worstIncrease)};
}

CheckResult check_witness_crossing(Ctx ctx) {
  witness::WitnessBudget budget;
  budget.seed = ctx.rng.split(9).seed();
  const SchmidtVector lambda({0.6, 0.3, 0.1});
  double lo = 0.85, hi = 0.95;
  const auto value_at = [&](double b) {
    return witness::pure_to_isotropic_nogo(lambda, b, 3, budget).value;
  };
  double flo = value_at(lo), fhi = value_at(hi);
  if (flo <= 0.0 || fhi >= 0.0)
    return {"witness-crossing", false,
            "no sign change on [0.85, 0.95]: " + fmt("%.3g", flo) + ", " + fmt("%.3g", fhi)};
  for (int it = 0; it < 22; ++it) {
    const double mid = 0.5 * (lo + hi);
    const double fmid = value_at(mid);
    if (fmid > 0.0)
      lo = mid;
    else
      hi = mid;
  }
  const double crossing = 0.5 * (lo + hi);
  const bool ok = crossing >= 0.890 && crossing <= 0.900;
  return {"witness-crossing", ok, "zero crossing at b = " + fmt("%.6f", crossing)};
}

CheckResult check_decomposition_gap(Ctx ctx) {
  oracle::SearchBudget budget;
  budget.seed = ctx.rng.split(11).seed();
  std::vector<int> dims{2, 3};
  std::vector<double> as{0.6, 0.75, 0.9};
  if (ctx.fast()) {
    budget.restarts = 16;
    budget.iterations = 900;
    dims = {2};
    as = {0.75};
  }
  const MonotoneSpec eof = MonotoneSpec::entropyOfEntanglement();
  double worstGap = 0.0, worstUndercut = -1.0;
  for (int d : dims)
    for (double a : as) {
      const double closed = roofs::roof_werner(eof, a, d);
      const oracle::DecompositionEstimate est = oracle::roof_upper_bound_by_decompositions(
          FamilyPoint::werner(a, d), eof, 0, budget, closed);
      worstGap = std::max(worstGap, est.value - closed);
      worstUndercut = std::max(worstUndercut, closed - est.value - 1e-6);
    }
  if (!ctx.fast()) {
    const double closed = roofs::iso_roof(eof, 0.7, 3).value;
    const oracle::DecompositionEstimate est = oracle::roof_upper_bound_by_decompositions(
        FamilyPoint::isotropic(0.7, 3), eof, 0, budget, closed);
    worstGap = std::max(worstGap, est.value - closed);
    worstUndercut = std::max(worstUndercut, closed - est.value - 1e-6);
  }
  const bool ok = worstGap <= 1e-3 && worstUndercut <= 0.0;
  return {"decomposition-gap", ok,
          "max gap above roof " + fmt("%.3g", worstGap) + ", max undercut slack " +
              fmt("%.3g", worstUndercut)};
}

CheckResult check_output_roundtrip(Ctx ctx) {
  (void)ctx;
  output::OutputRecord record;
  record.command = "verify self-test";
  record.metadata["seed"] = "42";
  record.metadata["tolerance"] = "1e-10";
  record.columns = {"b", "value", "flag"};
  record.addRow({1.0 / 3.0, -4.0 / 15.0, 1.0});
  record.addRow({0.8949454158314228, 1e-300, 0.0});
  record.addRow({-0.0, 2.2250738585072014e-308, 17.000000000000004});
  const output::OutputRecord viaCsv = output::from_csv(output::to_csv(record));
  const output::OutputRecord viaJson = output::from_json(output::to_json(record));
  const bool ok = viaCsv == record && viaJson == record;
  return {"output-roundtrip", ok, ok ? "CSV and JSON round-trips exact" : "round-trip mismatch"};
}

}  // namespace

bool Report::allPassed() const {
  for (const CheckResult& check : checks)
    if (!check.passed) return false;
  return !checks.empty();
}

Report run_suite(Suite suite, std::uint64_t seed) {
  const Rng root(seed);
  Report report;
  report.suite = suite;
  report.seed = seed;

  using Fn = std::function<CheckResult(Ctx)>;
  std::vector<std::pair<Fn, std::uint64_t>> checks = {
      {check_schmidt_reconstruction, 1},
      {check_family_coordinate_roundtrip, 2},
      {check_twirl_idempotence, 3},
      {check_twirl_monte_carlo, 4},
      {check_werner_fiber_bound, 5},
      {check_werner_eof_curve, 6},
      {check_vidal_werner, 7},
      {check_renyi_regimes, 8},
      {check_concurrence_roofs, 9},
      {check_vidal_iso_closed_form, 10},
      {check_iso_lower_bound, 11},
      {check_orbit_certificates, 12},
      {check_extended_roof_constancy, 13},
      {check_witness_werner_majorization, 14},
      {check_witness_d2_closed_form, 15},
      {check_witness_solver_vs_oracle, 16},
      {check_witness_monotone_in_b, 17},
      {check_decomposition_gap, 18},
      {check_output_roundtrip, 19},
  };
  if (suite == Suite::Full)
    checks.push_back({check_witness_crossing, 20});

  for (const auto& [fn, tag] : checks) {
    Ctx ctx{suite, root.split(tag)};
    try {
      report.checks.push_back(fn(std::move(ctx)));
    } catch (const std::exception& e) {
      report.checks.push_back({"check-" + std::to_string(tag), false,
                               std::string("exception: ") + e.what()});
    }
  }
  return report;
}

std::string render_table(const Report& report) {
  std::size_t width = 4;
  for (const CheckResult& check : report.checks) width = std::max(width, check.name.size());
  std::ostringstream out;
  out << "suite: " << (report.suite == Suite::Fast ? "fast" : "full")
      << "  seed: " << report.seed << "\n";
  int failed = 0;
  for (const CheckResult& check : report.checks) {
    out << (check.passed ? "PASS  " : "FAIL  ") << check.name;
    out << std::string(width - check.name.size() + 2, ' ') << check.detail << "\n";
    if (!check.passed) ++failed;
  }
  out << (failed == 0 ? "all checks passed"
                      : std::to_string(failed) + " check(s) failed")
      << " (" << report.checks.size() << " run)\n";
  return out.str();
}

}  // namespace symroof::verify
