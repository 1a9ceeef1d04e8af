#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "symroof/monotones.hpp"
#include "symroof/qcore.hpp"
#include "symroof/roofs.hpp"

#include <cmath>
#include <numbers>
#include <vector>

using namespace symroof::roofs;
using symroof::families::FamilyPoint;
using symroof::monotones::MonotoneSpec;
using symroof::qcore::build_operator;
using symroof::qcore::expectation;
using symroof::qcore::SchmidtVector;
using symroof::qcore::SymmetricOperator;

namespace {

double binary_entropy(double p) {
  double h = 0.0;
  if (p > 0.0) h -= p * std::log2(p);
  if (1.0 - p > 0.0) h -= (1.0 - p) * std::log2(1.0 - p);
  return h;
}

double werner_eof_formula(double a) {
  if (a <= 0.5) return 0.0;
  return binary_entropy(0.5 - std::sqrt(a * (1.0 - a)));
}

const ScalarEntropy kShannon{
    [](double x) { return x > 0.0 ? -x * std::log2(x) : 0.0; },
    [](double x) { return -(std::log2(std::max(x, 1e-300)) + 1.0 / std::numbers::ln2); }};

}  // namespace

TEST_CASE("convex envelope of 1-D samples") {
  // Convex input: the envelope passes through every sample.
  std::vector<std::pair<double, double>> convex;
  for (int i = 0; i <= 10; ++i) {
    const double x = i / 10.0;
    convex.emplace_back(x, x * x);
  }
  const EnvelopeFunction env = convex_envelope_1d(convex);
  for (const auto& [x, y] : convex) CHECK(env.eval(x) == doctest::Approx(y).epsilon(1e-14));

  // A bump gets cut by a chord.
  std::vector<std::pair<double, double>> bump{{0.0, 0.0}, {0.5, 1.0}, {1.0, 0.0}};
  const EnvelopeFunction cut = convex_envelope_1d(bump);
  CHECK(cut.eval(0.5) == doctest::Approx(0.0).epsilon(1e-14));
  CHECK(cut.vertexX().size() == 2);

  CHECK_THROWS_AS(convex_envelope_1d({{0.0, 1.0}}), std::invalid_argument);
  CHECK_THROWS_AS(convex_envelope_1d({{0.5, 1.0}, {0.5, 2.0}}), std::invalid_argument);
}

TEST_CASE("werner minimizer sits on the fiber, including the product branch") {
  const symroof::qcore::Matrix wm3 = build_operator(SymmetricOperator::WMinus, 3);
  for (double a : {0.0, 0.2, 0.45, 0.5, 0.6, 0.75, 0.9, 1.0}) {
    const MinimizerProfile prof = werner_minimizer(a);
    CHECK(expectation(wm3, prof.state(3)) == doctest::Approx(a).epsilon(1e-12));
    CHECK(prof.fiberCoordinate() == doctest::Approx(a).epsilon(1e-15));
  }
  // Below a = 1/2 the profile is a product state: single Schmidt coefficient.
  CHECK(werner_minimizer(0.3).schmidt()[0] == 1.0);
  // Above it the split is 1/2 +- sqrt(a(1-a)).
  const double h = std::sqrt(0.75 * 0.25);
  CHECK(werner_minimizer(0.75).schmidt()[0] == doctest::Approx(0.5 + h).epsilon(1e-15));
}

TEST_CASE("werner entropy roof matches the closed form") {
  const MonotoneSpec entropy = MonotoneSpec::entropyOfEntanglement();
  for (int i = 0; i <= 200; ++i) {
    const double a = i / 200.0;
    CHECK(roof_werner(entropy, a) ==
          doctest::Approx(werner_eof_formula(a)).epsilon(1e-12));
  }
  CHECK(roof_werner(entropy, 0.75) ==
        doctest::Approx(0.35457890266527003).epsilon(1e-14));
  CHECK(roof_werner(entropy, 0.5) == 0.0);
  CHECK(roof_werner(entropy, 1.0) == doctest::Approx(1.0).epsilon(1e-14));
}

TEST_CASE("werner vidal roofs") {
  const MonotoneSpec e1 = MonotoneSpec::vidal(1);
  for (int i = 0; i <= 100; ++i) {
    const double a = i / 100.0;
    const double expect = std::max(0.0, 0.5 - std::sqrt(a * (1.0 - a)));
    CHECK(roof_werner(e1, a) == doctest::Approx(expect).epsilon(1e-12));
  }
  CHECK(roof_werner(e1, 0.75) == doctest::Approx(0.0669872981077807).epsilon(1e-13));
  // Higher tail sums vanish identically: the minimizer has two levels.
  for (int k : {2, 3})
    for (double a : {0.6, 0.8, 1.0})
      CHECK(roof_werner(MonotoneSpec::vidal(k), a, 4) == 0.0);
}

TEST_CASE("werner renyi roofs per regime") {
  // alpha > 1: the fiber curve is already convex, the roof equals it.
  const MonotoneSpec r2 = MonotoneSpec::renyi(2.0);
  for (int i = 0; i <= 100; ++i) {
    const double a = 0.5 + i / 200.0;
    const double expect = -std::log2(0.5 + 2.0 * a * (1.0 - a));
    CHECK(roof_werner(r2, a) == doctest::Approx(expect).epsilon(1e-12));
  }
  // alpha < 1/2: the roof is the chord max(0, 2a - 1).
  const MonotoneSpec rq = MonotoneSpec::renyi(0.25);
  CHECK(roof_werner(rq, 0.8) == doctest::Approx(0.6).epsilon(1e-9));
  for (double a : {0.1, 0.5, 0.6, 0.9, 1.0})
    CHECK(roof_werner_via_envelope(rq, a) ==
          doctest::Approx(std::max(0.0, 2.0 * a - 1.0)).epsilon(1e-6));
  // The envelope fallback agrees with the fast path where both exist.
  const MonotoneSpec entropy = MonotoneSpec::entropyOfEntanglement();
  for (double a : {0.55, 0.7, 0.85})
    CHECK(roof_werner_via_envelope(entropy, a) ==
          doctest::Approx(roof_werner(entropy, a)).epsilon(5e-4));
}

TEST_CASE("iso vidal roof closed form and boundary zeros") {
  for (int d : {3, 4, 5}) {
    for (int k = 1; k < d; ++k) {
      CHECK(iso_vidal_roof(k, static_cast<double>(k) / d, d) == 0.0);
      CHECK(iso_vidal_roof(k, 0.5 * k / d, d) == 0.0);
      CHECK(iso_vidal_roof(k, 1.0, d) ==
            doctest::Approx((d - k) / static_cast<double>(d)).epsilon(1e-14));
      for (int i = 0; i <= 20; ++i) {
        const double b = static_cast<double>(k) / d +
                         (1.0 - static_cast<double>(k) / d) * i / 20.0;
        const double expect =
            std::pow(std::sqrt((1.0 - b) * k) - std::sqrt(b * (d - k)), 2) / d;
        CHECK(iso_vidal_roof(k, b, d) == doctest::Approx(expect).epsilon(1e-12));
      }
    }
    CHECK(iso_vidal_roof(d, 1.0, d) == 0.0);
  }
}

TEST_CASE("iso vidal minimizer lies on the fiber and attains the roof") {
  for (int d : {3, 5}) {
    for (int k = 1; k < d; ++k) {
      for (double frac : {0.1, 0.5, 0.9}) {
        const double b = static_cast<double>(k) / d + (1.0 - static_cast<double>(k) / d) * frac;
        const MinimizerProfile prof = iso_vidal_minimizer(k, b, d);
        CHECK(prof.kind() == ProfileKind::IsoTwoLevel);
        CHECK(prof.fiberCoordinate() == doctest::Approx(b).epsilon(1e-12));
        double tail = 0.0;
        for (int i = k; i < prof.schmidt().size(); ++i) tail += prof.schmidt()[i];
        CHECK(tail == doctest::Approx(iso_vidal_roof(k, b, d)).epsilon(1e-12));
      }
    }
  }
}

TEST_CASE("iso lambda-beta vector reproduces every vidal roof as a tail sum") {
  for (int d : {3, 4, 6}) {
    for (double b : {0.5, 0.8, 0.95}) {
      if (b < 1.0 / d) continue;
      const SchmidtVector lb = iso_lambda_beta(b, d);
      double tail = 1.0;
      for (int k = 1; k < d; ++k) {
        tail -= lb[k - 1];
        CHECK(tail == doctest::Approx(iso_vidal_roof(k, b, d)).epsilon(1e-11));
      }
    }
  }
  // Spot values at d = 3, b = 0.8.
  const SchmidtVector lb = iso_lambda_beta(0.8, 3);
  CHECK(lb[0] == doctest::Approx(0.77712362).epsilon(1e-7));
  CHECK(lb[1] == doctest::Approx(0.2).epsilon(1e-9));
  CHECK(lb[2] == doctest::Approx(0.02287638).epsilon(1e-6));
  // The lower bound never exceeds the true roof.
  const MonotoneSpec entropy = MonotoneSpec::entropyOfEntanglement();
  for (double b : {0.4, 0.6, 0.8, 0.99})
    CHECK(iso_lower_bound_roof(entropy, b, 3) <=
          iso_roof(entropy, b, 3).value + 1e-12);
}

TEST_CASE("entropy regime classifier") {
  CHECK(classify_entropy_regime(kShannon.fprime) == BerryRegime::Concave);
  // Tsallis q = 1/4 summand: f'(y) = (q y^(q-1) - 1)/(1 - q) bends the other way.
  const auto tsallisPrime = [](double y) {
    const double q = 0.25;
    return (q * std::pow(y, q - 1.0) - 1.0) / (1.0 - q);
  };
  CHECK(classify_entropy_regime(tsallisPrime) == BerryRegime::Convex);
  // Oscillating profiles have no single regime.
  CHECK_THROWS_AS(classify_entropy_regime([](double y) { return std::sin(200.0 * y); }),
                  std::domain_error);
}

TEST_CASE("iso entropy minimum: frozen curve values at d = 3") {
  const EntropyMinimum at07 = iso_entropy_minimum(kShannon, 0.7, 3);
  CHECK(at07.value == doctest::Approx(0.7045837691288886).epsilon(1e-9));
  CHECK(at07.profile.kind() == ProfileKind::IsoTopHeavy);

  const double t1 = iso_t_topheavy(0.8, 3);
  CHECK(t1 == doctest::Approx(0.7771).epsilon(2e-4));
  // The top-heavy profile sits on the fiber.
  CHECK(std::sqrt(t1) + 2.0 * std::sqrt((1.0 - t1) / 2.0) ==
        doctest::Approx(std::sqrt(3.0 * 0.8)).epsilon(1e-9));
  const EntropyMinimum at08 = iso_entropy_minimum(kShannon, 0.8, 3);
  CHECK(at08.value == doctest::Approx(0.98857).epsilon(2e-4));

  const auto [t2, k2] = iso_t_truncated(0.8, 3);
  CHECK(k2 == 2);
  CHECK(t2 == doctest::Approx(0.48860).epsilon(2e-4));
  CHECK(2.0 * std::sqrt(t2) + std::sqrt(1.0 - 2.0 * t2) ==
        doctest::Approx(std::sqrt(3.0 * 0.8)).epsilon(1e-9));
  // For the Shannon summand the truncated candidate is the larger one here.
  const SchmidtVector trunc = MinimizerProfile::isoTruncated(t2, k2, 3).schmidt();
  CHECK(symroof::monotones::entropy_of_entanglement(trunc) ==
        doctest::Approx(1.13408).epsilon(2e-4));
  CHECK(symroof::monotones::entropy_of_entanglement(trunc) > at08.value);
}

TEST_CASE("iso fiber minimum dispatches renyi regimes") {
  const EntropyMinimum top = iso_fiber_minimum(MonotoneSpec::renyi(2.0), 0.8, 3);
  CHECK(top.profile.kind() == ProfileKind::IsoTopHeavy);
  CHECK(top.value ==
        doctest::Approx(symroof::monotones::renyi_entropy(top.profile.schmidt(), 2.0))
            .epsilon(1e-14));
  const EntropyMinimum trunc = iso_fiber_minimum(MonotoneSpec::renyi(0.25), 0.8, 3);
  CHECK(trunc.profile.kind() == ProfileKind::IsoTruncated);
  // alpha = 1/2 is constant along the fiber.
  for (double b : {0.5, 0.7, 0.95})
    CHECK(iso_fiber_minimum(MonotoneSpec::renyi(0.5), b, 3).value ==
          doctest::Approx(std::log2(3.0 * b)).epsilon(1e-12));
}

TEST_CASE("iso entropy roof: convex, below the curve, exact at the ends") {
  const MonotoneSpec entropy = MonotoneSpec::entropyOfEntanglement();
  const int d = 3;
  std::vector<double> roofVals;
  for (int i = 0; i <= 200; ++i) {
    const double b = i / 200.0;
    const RoofResult r = iso_roof(entropy, b, d);
    roofVals.push_back(r.value);
    CHECK(r.value <= r.fiber_minimum + 1e-12);
    if (b <= 1.0 / d) CHECK(r.value == 0.0);
  }
  CHECK(roofVals.back() == doctest::Approx(std::log2(3.0)).epsilon(1e-9));
  for (std::size_t i = 1; i + 1 < roofVals.size(); ++i)
    CHECK(roofVals[i + 1] - 2.0 * roofVals[i] + roofVals[i - 1] >= -1e-9);
  // Near b = 1 the curve bends the wrong way for d >= 3, so the roof leaves it.
  double worstGap = 0.0;
  for (double b : {0.95, 0.97, 0.99}) {
    const RoofResult r = iso_roof(entropy, b, d);
    worstGap = std::max(worstGap, r.fiber_minimum - r.value);
  }
  CHECK(worstGap > 1e-9);
}

TEST_CASE("iso concurrence roofs are the chords of concave pre-envelopes") {
  for (int d : {3, 4, 5}) {
    for (int i = 0; i <= 50; ++i) {
      const double b = i / 50.0;
      CHECK(iso_c2_roof(b, d) ==
            doctest::Approx(std::max(0.0, (d * b - 1.0) / (d - 1))).epsilon(1e-14));
      CHECK(iso_cd_roof(b, d) ==
            doctest::Approx(std::max(0.0, d * b - d + 1.0)).epsilon(1e-14));
    }
    // Concavity of the pre-envelopes, and the chord endpoints match them.
    std::vector<double> c2;
    for (int i = 0; i <= 100; ++i) c2.push_back(iso_c2_preenvelope(1.0 / d + (1.0 - 1.0 / d) * i / 100.0, d));
    for (std::size_t i = 1; i + 1 < c2.size(); ++i)
      CHECK(c2[i + 1] - 2.0 * c2[i] + c2[i - 1] <= 1e-9);
    CHECK(c2.front() == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(c2.back() == doctest::Approx(1.0).epsilon(1e-12));
    // The chord never exceeds the concave curve in between.
    for (int i = 0; i <= 100; ++i) {
      const double b = 1.0 / d + (1.0 - 1.0 / d) * i / 100.0;
      CHECK(iso_c2_roof(b, d) <= iso_c2_preenvelope(b, d) + 1e-12);
    }
  }
}

TEST_CASE("region membership lemmas") {
  CHECK(region_membership(FamilyPoint::werner(0.3, 3)) == Region::WernerOrbitRegion);
  CHECK(region_membership(FamilyPoint::isotropic(0.1, 3)) == Region::IsoOrbitRegion);
  // OO: Werner side needs a >= 1/2 and b <= 2(1-a)/d.
  CHECK(region_membership(FamilyPoint::oo(0.6, 0.2, 3)) == Region::WernerOrbitRegion);
  CHECK(region_membership(FamilyPoint::oo(0.6, 0.3, 3)) == Region::Unknown);
  // OO: isotropic side needs b >= 1/d and a <= d(1-b)/(2(d-1)).
  CHECK(region_membership(FamilyPoint::oo(0.2, 0.5, 3)) == Region::IsoOrbitRegion);
  CHECK(region_membership(FamilyPoint::oo(0.45, 0.5, 3)) == Region::Unknown);
  CHECK(region_membership(FamilyPoint::oo(0.7, 0.3, 3)) == Region::Unknown);
  CHECK(region_membership(FamilyPoint::ppWerner(0.7, 0.2, 3)) == Region::WernerOrbitRegion);
  CHECK(region_membership(FamilyPoint::ppWerner(0.3, 0.2, 3)) == Region::Unknown);
  CHECK(region_membership(FamilyPoint::ppIsotropic(0.2, 0.5, 3)) == Region::IsoOrbitRegion);
  CHECK(region_membership(FamilyPoint::ppIsotropic(0.2, 0.2, 3)) == Region::Unknown);
}

TEST_CASE("extended roof is the 1-D roof at the invariant coordinate") {
  const MonotoneSpec entropy = MonotoneSpec::entropyOfEntanglement();
  // Werner-side OO points: value depends only on a.
  const double base = roof_werner(entropy, 0.8, 3);
  for (double b : {0.0, 0.05, 0.1, 2.0 * 0.2 / 3.0}) {
    const RoofResult r = extended_roof(entropy, FamilyPoint::oo(0.8, b, 3));
    CHECK(r.value == doctest::Approx(base).epsilon(1e-13));
  }
  // Isotropic-side points: value depends only on b.
  const double isoBase = iso_roof(entropy, 0.6, 3).value;
  const RoofResult r = extended_roof(entropy, FamilyPoint::ppIsotropic(0.15, 0.6, 3));
  CHECK(r.value == doctest::Approx(isoBase).epsilon(1e-13));
  CHECK_THROWS_AS(extended_roof(entropy, FamilyPoint::oo(0.7, 0.3, 3)),
                  std::domain_error);
}

TEST_CASE("continuity extension flag on off-axis points") {
  const MonotoneSpec entropy = MonotoneSpec::entropyOfEntanglement();
  // On-axis isotropic point near b = 1: the envelope departs from the curve but
  // no continuity argument is needed on the family axis itself.
  CHECK_FALSE(iso_roof(entropy, 0.97, 3).via_continuity);
  // The same coordinate reached off-axis needs the continuity extension.
  const double aSmall = 0.01;
  const RoofResult off = extended_roof(entropy, FamilyPoint::ppIsotropic(aSmall, 0.97, 3));
  CHECK(off.via_continuity);
  // A discontinuous monotone is rejected there.
  const MonotoneSpec loose = MonotoneSpec::generalizedEntropy(
      [](double x) { return x > 0.0 ? -x * std::log2(x) : 0.0; },
      [](double x) { return -(std::log2(std::max(x, 1e-300)) + 1.0 / std::numbers::ln2); },
      /*assumeContinuous=*/false);
  CHECK_THROWS_AS(extended_roof(loose, FamilyPoint::ppIsotropic(aSmall, 0.97, 3)),
                  std::domain_error);
}

TEST_CASE("orbit membership certificates verify to ten digits") {
  const MonotoneSpec entropy = MonotoneSpec::entropyOfEntanglement();
  for (int d : {2, 3, 4}) {
    for (double a : {0.5, 0.75, 1.0}) {
      const OrbitCertificate cert =
          orbit_membership_certificate(FamilyPoint::werner(a, d), werner_minimizer(a));
      CHECK(cert.verified);
      CHECK(cert.maxError <= 1e-10);
      CHECK(cert.entries.size() >= 2);
    }
    for (double b : {0.5, 0.8}) {
      if (b <= 1.0 / d) continue;
      const MinimizerProfile prof = iso_fiber_minimum(entropy, b, d).profile;
      const OrbitCertificate cert =
          orbit_membership_certificate(FamilyPoint::isotropic(b, d), prof);
      CHECK(cert.verified);
      CHECK(cert.maxError <= 1e-10);
    }
  }
}
