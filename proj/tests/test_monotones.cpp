#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "symroof/monotones.hpp"
#include "symroof/qcore.hpp"

#include <cmath>
#include <vector>

using namespace symroof::monotones;
using symroof::qcore::Rng;
using symroof::qcore::SchmidtVector;

namespace {

// Random pair (x, y) with x obtained from y by Robin Hood transfers, so x
// majorizes y by construction.
std::pair<SchmidtVector, SchmidtVector> majorizing_pair(int d, Rng& rng) {
  std::vector<double> y(static_cast<std::size_t>(d));
  double sum = 0.0;
  for (double& v : y) sum += v = -std::log(1.0 - rng.uniform());
  for (double& v : y) v /= sum;
  std::sort(y.begin(), y.end(), std::greater<>());
  std::vector<double> x = y;
  for (int t = 0; t < 3; ++t) {
    const int i = static_cast<int>(rng.uniformInt(static_cast<std::uint64_t>(d)));
    const int j = static_cast<int>(rng.uniformInt(static_cast<std::uint64_t>(d)));
    const int hi = std::min(i, j), lo = std::max(i, j);
    if (hi == lo) continue;
    const double amount = rng.uniform() * x[static_cast<std::size_t>(lo)];
    x[static_cast<std::size_t>(hi)] += amount;
    x[static_cast<std::size_t>(lo)] -= amount;
    std::sort(x.begin(), x.end(), std::greater<>());
  }
  return {SchmidtVector::fromUnsorted(std::move(x)), SchmidtVector::fromUnsorted(std::move(y))};
}

}  // namespace

TEST_CASE("shannon entropy frozen value and edge cases") {
  const SchmidtVector lam({0.6, 0.3, 0.1});
  CHECK(entropy_of_entanglement(lam) ==
        doctest::Approx(1.295461844238322).epsilon(1e-15));
  CHECK(entropy_of_entanglement(SchmidtVector({1.0})) == 0.0);
  CHECK(entropy_of_entanglement(SchmidtVector({1.0, 0.0})) == 0.0);
  CHECK(entropy_of_entanglement(SchmidtVector::uniform(4)) ==
        doctest::Approx(2.0).epsilon(1e-15));
}

TEST_CASE("renyi entropy frozen value, limits, and domain") {
  CHECK(renyi_entropy(SchmidtVector({0.6, 0.4}), 2.0) ==
        doctest::Approx(0.9434164716336325).epsilon(1e-15));
  const SchmidtVector lam({0.5, 0.3, 0.2});
  const double h = entropy_of_entanglement(lam);
  CHECK(renyi_entropy(lam, 1.0 + 1e-7) == doctest::Approx(h).epsilon(1e-5));
  CHECK(renyi_entropy(lam, 1.0 - 1e-7) == doctest::Approx(h).epsilon(1e-5));
  CHECK(renyi_entropy(SchmidtVector::uniform(8), 0.5) ==
        doctest::Approx(3.0).epsilon(1e-14));
  CHECK_THROWS_AS(MonotoneSpec::renyi(1.0), std::invalid_argument);
  CHECK_THROWS_AS(MonotoneSpec::renyi(0.0), std::invalid_argument);
  CHECK_THROWS_AS(MonotoneSpec::renyi(-2.0), std::invalid_argument);
}

TEST_CASE("vidal tail sums") {
  const SchmidtVector lam({0.6, 0.3, 0.1});
  CHECK(vidal_ek(lam, 1) == doctest::Approx(0.4).epsilon(1e-15));
  CHECK(vidal_ek(lam, 2) == doctest::Approx(0.1).epsilon(1e-15));
  CHECK(vidal_ek(lam, 3) == 0.0);
  CHECK(vidal_ek(SchmidtVector::uniform(5), 2) == doctest::Approx(0.6).epsilon(1e-14));
  CHECK_THROWS_AS(MonotoneSpec::vidal(0), std::invalid_argument);
}

TEST_CASE("concurrence frozen value and uniform normalization") {
  // C_2(0.5, 0.3, 0.2) = 3 sqrt((0.15 + 0.10 + 0.06) / 3) = sqrt(0.93).
  CHECK(concurrence_ck(SchmidtVector({0.5, 0.3, 0.2}), 2) ==
        doctest::Approx(std::sqrt(0.93)).epsilon(1e-15));
  CHECK(concurrence_ck(SchmidtVector({0.5, 0.3, 0.2}), 2) ==
        doctest::Approx(0.9643650760992956).epsilon(1e-15));
  for (int d : {3, 4, 5})
    for (int k = 2; k <= d; ++k)
      CHECK(concurrence_ck(SchmidtVector::uniform(d), k) ==
            doctest::Approx(1.0).epsilon(1e-13));
  CHECK_THROWS_AS(MonotoneSpec::concurrence(1), std::invalid_argument);
}

TEST_CASE("elementary symmetric polynomials") {
  const std::vector<double> s = elementary_symmetric({1.0, 2.0, 3.0}, 3);
  REQUIRE(s.size() == 4);  // S_0 = 1 included
  CHECK(s[0] == 1.0);
  CHECK(s[1] == doctest::Approx(6.0).epsilon(1e-15));
  CHECK(s[2] == doctest::Approx(11.0).epsilon(1e-15));
  CHECK(s[3] == doctest::Approx(6.0).epsilon(1e-15));
}

TEST_CASE("generalized entropy matches shannon for the shannon summand") {
  const auto f = [](double x) { return x > 0.0 ? -x * std::log2(x) : 0.0; };
  const MonotoneSpec spec = MonotoneSpec::generalizedEntropy(f);
  const SchmidtVector lam({0.6, 0.3, 0.1});
  CHECK(spec.eval(lam) == doctest::Approx(entropy_of_entanglement(lam)).epsilon(1e-14));
  CHECK(generalized_entropy(lam, f) ==
        doctest::Approx(entropy_of_entanglement(lam)).epsilon(1e-14));
  // f(0) != 0 is rejected.
  CHECK_THROWS_AS(MonotoneSpec::generalizedEntropy([](double) { return 1.0; }),
                  std::invalid_argument);
}

TEST_CASE("all monotones are schur concave") {
  std::vector<MonotoneSpec> specs;
  specs.push_back(MonotoneSpec::entropyOfEntanglement());
  specs.push_back(MonotoneSpec::vidal(1));
  specs.push_back(MonotoneSpec::vidal(2));
  specs.push_back(MonotoneSpec::renyi(0.5));
  specs.push_back(MonotoneSpec::renyi(2.0));
  specs.push_back(MonotoneSpec::concurrence(2));
  Rng rng(2024);
  for (int rep = 0; rep < 500; ++rep) {
    const int d = 2 + static_cast<int>(rng.uniformInt(5));
    const auto [x, y] = majorizing_pair(d, rng);
    REQUIRE(symroof::qcore::majorizes(x, y));
    for (const MonotoneSpec& spec : specs)
      CHECK(spec.eval(x) <= spec.eval(y) + 1e-12);
  }
}

TEST_CASE("gradients match finite differences at interior points") {
  std::vector<MonotoneSpec> specs;
  specs.push_back(MonotoneSpec::entropyOfEntanglement());
  specs.push_back(MonotoneSpec::renyi(2.0));
  specs.push_back(MonotoneSpec::renyi(0.5));
  specs.push_back(MonotoneSpec::concurrence(2));
  const std::vector<double> lam{0.5, 0.3, 0.2};  // distinct entries, away from 0
  const double eps = 1e-6;
  for (const MonotoneSpec& spec : specs) {
    const std::vector<double> g = spec.gradient(lam);
    REQUIRE(g.size() == lam.size());
    for (std::size_t i = 0; i < lam.size(); ++i) {
      std::vector<double> up = lam, dn = lam;
      up[i] += eps;
      dn[i] -= eps;
      // Evaluate the raw (unnormalized-tolerant) sum form via eval on rescaled
      // copies is not valid; use the definition through gradient consistency:
      // central difference of eval on renormalized inputs would mix directions.
      // Instead check the directional derivative along (e_i - e_j), which stays
      // on the simplex.
      const std::size_t j = (i + 1) % lam.size();
      std::vector<double> fwd = lam, bwd = lam;
      fwd[i] += eps;
      fwd[j] -= eps;
      bwd[i] -= eps;
      bwd[j] += eps;
      const double numeric =
          (spec.eval(SchmidtVector::fromUnsorted(fwd)) -
           spec.eval(SchmidtVector::fromUnsorted(bwd))) /
          (2.0 * eps);
      const double analytic = g[i] - g[j];
      CHECK(numeric == doctest::Approx(analytic).epsilon(1e-5));
    }
  }
}

TEST_CASE("monotone spec names and flags") {
  CHECK(MonotoneSpec::vidal(2).name() == "vidal:2");
  CHECK(MonotoneSpec::renyi(0.5).name() == "renyi:0.5");
  CHECK(MonotoneSpec::entropyOfEntanglement().name() == "entropy");
  CHECK(MonotoneSpec::concurrence(3).name() == "concurrence:3");
  CHECK(MonotoneSpec::entropyOfEntanglement().continuous());
  CHECK(MonotoneSpec::vidal(1).continuous());
  CHECK_FALSE(MonotoneSpec::generalizedEntropy([](double x) { return x * (1 - x); })
                  .continuous());
}
