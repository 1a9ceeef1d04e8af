#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "symroof/families.hpp"
#include "symroof/qcore.hpp"

#include <cmath>
#include <vector>

using namespace symroof::families;
using symroof::qcore::build_operator;
using symroof::qcore::DensityMatrix;
using symroof::qcore::expectation;
using symroof::qcore::Matrix;
using symroof::qcore::PureState;
using symroof::qcore::Rng;
using symroof::qcore::SymmetricOperator;

namespace {

DensityMatrix random_density(int d, Rng& rng, int mixture = 3) {
  Matrix rho = Matrix::Zero(d * d, d * d);
  double total = 0.0;
  std::vector<double> w(static_cast<std::size_t>(mixture));
  for (double& x : w) total += x = rng.uniform() + 0.05;
  for (double x : w) {
    const PureState psi = PureState::haarRandom(d, d, rng);
    rho += (x / total) * (psi.amplitudes() * psi.amplitudes().adjoint());
  }
  return DensityMatrix(rho, d, d);
}

std::vector<FamilyPoint> sample_points(int d) {
  return {FamilyPoint::werner(0.3, d),       FamilyPoint::werner(0.8, d),
          FamilyPoint::isotropic(0.1, d),    FamilyPoint::isotropic(0.7, d),
          FamilyPoint::oo(0.5, 0.2, d),      FamilyPoint::oo(0.1, 0.6, d),
          FamilyPoint::ppWerner(0.6, 0.1, d), FamilyPoint::ppIsotropic(0.2, 0.5, d)};
}

}  // namespace

TEST_CASE("family density matrices reproduce the defining coordinates") {
  for (int d : {2, 3, 4}) {
    for (const FamilyPoint& p : sample_points(d)) {
      const DensityMatrix rho = family_to_density(p);
      const FamilyPoint back = twirl(rho, p.family);
      CHECK(back.family == p.family);
      CHECK(back.d == d);
      CHECK(back.a == doctest::Approx(p.a).epsilon(1e-12));
      CHECK(back.b == doctest::Approx(p.b).epsilon(1e-12));
    }
  }
}

TEST_CASE("werner and isotropic coordinates are operator expectations") {
  const int d = 3;
  const Matrix wm = build_operator(SymmetricOperator::WMinus, d);
  const Matrix phi = build_operator(SymmetricOperator::PhiD, d);
  Rng rng(31);
  for (int rep = 0; rep < 5; ++rep) {
    const DensityMatrix rho = random_density(d, rng);
    CHECK(twirl(rho, Family::Werner).a ==
          doctest::Approx(expectation(wm, rho)).epsilon(1e-12));
    CHECK(twirl(rho, Family::Isotropic).b ==
          doctest::Approx(expectation(phi, rho)).epsilon(1e-12));
  }
}

TEST_CASE("twirl is idempotent") {
  Rng rng(77);
  for (Family fam : {Family::Werner, Family::Isotropic, Family::OO, Family::PPWerner,
                     Family::PPIsotropic}) {
    const DensityMatrix rho = random_density(3, rng);
    const DensityMatrix once = twirl_to_density(rho, fam);
    const DensityMatrix twice = twirl_to_density(once, fam);
    CHECK((once.matrix() - twice.matrix()).cwiseAbs().maxCoeff() <= 1e-12);
  }
}

TEST_CASE("twirled states are invariant under their symmetry group") {
  Rng rng(55);
  for (Family fam : {Family::Werner, Family::Isotropic, Family::OO, Family::PPWerner,
                     Family::PPIsotropic}) {
    const DensityMatrix rho = random_density(3, rng);
    const Matrix fixed = twirl_to_density(rho, fam).matrix();
    for (int rep = 0; rep < 10; ++rep) {
      const GroupElement g = sample_group_element(fam, 3, rng);
      const Matrix moved = conjugate_local(fixed, g.left, g.right);
      CHECK((moved - fixed).cwiseAbs().maxCoeff() <= 1e-10);
    }
  }
}

TEST_CASE("monte carlo group average approaches the exact twirl") {
  Rng rng(404);
  const int d = 2, n = 4000;
  const DensityMatrix rho = random_density(d, rng);
  for (Family fam : {Family::Werner, Family::Isotropic}) {
    Matrix avg = Matrix::Zero(d * d, d * d);
    for (int i = 0; i < n; ++i) {
      const GroupElement g = sample_group_element(fam, d, rng);
      avg += conjugate_local(rho.matrix(), g.left, g.right) / n;
    }
    const Matrix exact = twirl_to_density(rho, fam).matrix();
    CHECK((avg - exact).cwiseAbs().maxCoeff() <= 5e-2);
  }
}

TEST_CASE("separability boundaries") {
  CHECK(is_separable(FamilyPoint::werner(0.5, 3)));
  CHECK(is_separable(FamilyPoint::werner(0.2, 3)));
  CHECK_FALSE(is_separable(FamilyPoint::werner(0.51, 3)));
  CHECK(is_separable(FamilyPoint::isotropic(1.0 / 3, 3)));
  CHECK_FALSE(is_separable(FamilyPoint::isotropic(0.34, 3)));
  CHECK(is_separable(FamilyPoint::oo(0.4, 0.2, 3)));
  CHECK_FALSE(is_separable(FamilyPoint::oo(0.6, 0.2, 3)));
  CHECK_THROWS_AS(is_separable(FamilyPoint::ppWerner(0.6, 0.1, 3)),
                  std::invalid_argument);
  CHECK_THROWS_AS(is_separable(FamilyPoint::ppIsotropic(0.2, 0.5, 3)),
                  std::invalid_argument);
}

TEST_CASE("family point validation") {
  CHECK_THROWS_AS(FamilyPoint::werner(1.2, 3), std::invalid_argument);
  CHECK_THROWS_AS(FamilyPoint::werner(-0.1, 3), std::invalid_argument);
  CHECK_THROWS_AS(FamilyPoint::isotropic(1.5, 3), std::invalid_argument);
  CHECK_THROWS_AS(FamilyPoint::oo(0.7, 0.7, 3), std::invalid_argument);  // a + b > 1
  CHECK_THROWS_AS(FamilyPoint::werner(0.5, 1), std::invalid_argument);
  CHECK(FamilyPoint::oo(0.5, 0.5, 3).describe().size() > 0);
}

TEST_CASE("conjugate_local equals the explicit kronecker conjugation") {
  Rng rng(9);
  const int d = 3;
  const DensityMatrix rho = random_density(d, rng);
  const Matrix a = symroof::qcore::haar_unitary(d, rng).matrix();
  const Matrix b = symroof::qcore::haar_unitary(d, rng).matrix();
  Matrix kron = Matrix::Zero(d * d, d * d);
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j)
      kron.block(i * d, j * d, d, d) = a(i, j) * b;
  const Matrix expect = kron * rho.matrix() * kron.adjoint();
  CHECK((conjugate_local(rho.matrix(), a, b) - expect).cwiseAbs().maxCoeff() <= 1e-12);
}
