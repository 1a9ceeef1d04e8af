#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "symroof/families.hpp"
#include "symroof/monotones.hpp"
#include "symroof/oracle.hpp"
#include "symroof/roofs.hpp"

#include <cmath>

using namespace symroof::oracle;
using symroof::families::FamilyPoint;
using symroof::monotones::MonotoneSpec;

namespace {

// Reduced budget keeping the unit tests quick; the acceptance suite runs the
// default budget.
SearchBudget quick() {
  SearchBudget b;
  b.restarts = 16;
  b.iterations = 800;
  return b;
}

}  // namespace

TEST_CASE("iso fiber oracle brackets the vidal closed form") {
  for (int d : {3, 4}) {
    for (int k = 1; k < d; ++k) {
      for (double frac : {0.3, 0.7, 1.0}) {
        const double b = static_cast<double>(k) / d + (1.0 - static_cast<double>(k) / d) * frac;
        const double closed = symroof::roofs::iso_vidal_roof(k, b, d);
        const OracleEstimate est =
            min_on_iso_fiber(MonotoneSpec::vidal(k), b, d, quick(), closed);
        CHECK(est.value >= closed - 1e-6);
        CHECK(est.value <= closed + 1e-3);
        REQUIRE(est.gapToClosedForm.has_value());
        CHECK(*est.gapToClosedForm <= 1e-3);
      }
    }
  }
}

TEST_CASE("iso fiber oracle brackets the entropy fiber curve") {
  const MonotoneSpec entropy = MonotoneSpec::entropyOfEntanglement();
  for (double b : {0.5, 0.7, 0.9}) {
    const double closed = symroof::roofs::iso_fiber_minimum(entropy, b, 3).value;
    const OracleEstimate est = min_on_iso_fiber(entropy, b, 3, quick(), closed);
    CHECK(est.value >= closed - 1e-6);
    CHECK(est.value <= closed + 1e-3);
    // The argmin is a sorted probability vector.
    double sum = 0.0;
    for (std::size_t i = 0; i < est.argmin.size(); ++i) {
      sum += est.argmin[i];
      if (i) CHECK(est.argmin[i] <= est.argmin[i - 1] + 1e-12);
    }
    CHECK(sum == doctest::Approx(1.0).epsilon(1e-9));
    CHECK(est.restartsUsed == quick().restarts);
  }
}

TEST_CASE("werner fiber oracle brackets the entropy curve") {
  const MonotoneSpec entropy = MonotoneSpec::entropyOfEntanglement();
  for (double a : {0.6, 0.75, 0.9}) {
    const double closed = symroof::roofs::werner_fiber_value(entropy, a, 2);
    const OracleEstimate est = min_on_werner_fiber(entropy, a, 2, quick(), closed);
    CHECK(est.value >= closed - 1e-6);
    CHECK(est.value <= closed + 1e-3);
  }
  // d = 3 product branch: the minimum below a = 1/2 is zero.
  const OracleEstimate flat =
      min_on_werner_fiber(entropy, 0.3, 3, quick(), 0.0);
  CHECK(flat.value >= -1e-12);
  CHECK(flat.value <= 1e-3);
}

TEST_CASE("decomposition search upper-bounds the werner entropy roof") {
  const MonotoneSpec entropy = MonotoneSpec::entropyOfEntanglement();
  const double a = 0.75;
  const double roof = symroof::roofs::roof_werner(entropy, a, 2);
  SearchBudget b = quick();
  b.iterations = 900;
  const DecompositionEstimate est = roof_upper_bound_by_decompositions(
      FamilyPoint::werner(a, 2), entropy, 0, b, roof);
  CHECK(est.value >= roof - 1e-6);
  CHECK(est.value <= roof + 1e-3);
  // The ensemble is a true decomposition: weights sum to one and the weighted
  // fiber coordinates average back to the family coordinate.
  double wsum = 0.0, csum = 0.0;
  for (const EnsembleMember& m : est.ensemble) {
    CHECK(m.weight >= 0.0);
    wsum += m.weight;
    csum += m.weight * m.fiberCoordinate;
  }
  CHECK(wsum == doctest::Approx(1.0).epsilon(1e-9));
  CHECK(csum == doctest::Approx(a).epsilon(1e-8));
}

TEST_CASE("decomposition search rejects ensembles smaller than the rank") {
  CHECK_THROWS_AS(
      roof_upper_bound_by_decompositions(FamilyPoint::werner(0.75, 2),
                                         MonotoneSpec::entropyOfEntanglement(), 2),
      std::invalid_argument);
}

TEST_CASE("witness oracle reproduces a frozen interior value") {
  const symroof::qcore::SchmidtVector lam({0.6, 0.3, 0.1});
  SearchBudget b = quick();
  b.restarts = 24;
  b.iterations = 1200;
  const OracleEstimate est = witness_oracle(lam, 0.8, 3, b);
  CHECK(est.value == doctest::Approx(0.06552539).epsilon(2e-4));
  const OracleEstimate corner = witness_oracle(lam, 1.0, 3, b);
  CHECK(std::abs(corner.value + 4.0 / 15.0) <= 1e-8);
}

TEST_CASE("oracle input validation") {
  const MonotoneSpec entropy = MonotoneSpec::entropyOfEntanglement();
  SearchBudget bad;
  bad.restarts = 0;
  CHECK_THROWS_AS(min_on_iso_fiber(entropy, 0.8, 3, bad), std::invalid_argument);
  CHECK_THROWS_AS(min_on_iso_fiber(entropy, 0.1, 3), std::invalid_argument);  // b < 1/d
  CHECK_THROWS_AS(min_on_iso_fiber(entropy, 0.8, 1), std::invalid_argument);
  const symroof::qcore::SchmidtVector lam({0.6, 0.3, 0.1});
  CHECK_THROWS_AS(witness_oracle(lam, 0.8, 2), std::invalid_argument);  // lambda longer than d
}
