#include "symroof/families.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

namespace symroof::families {

using qcore::build_operator;
using qcore::Complex;
using qcore::SymmetricOperator;

namespace {

double binom(int n, int k) {
  double out = 1.0;
  for (int i = 1; i <= k; ++i) out = out * (n - k + i) / i;
  return out;
}

void checkCoordinate(const char* name, double v) {
  if (v < -1e-12 || v > 1.0 + 1e-12)
    throw std::invalid_argument(std::string(name) + " coordinate outside [0, 1]");
}

void checkPair(double a, double b) {
  checkCoordinate("a", a);
  checkCoordinate("b", b);
  if (a + b > 1.0 + 1e-12)
    throw std::invalid_argument("family coordinates must satisfy a + b <= 1");
}

void checkDim(int d) {
  if (d < 2) throw std::invalid_argument("family dimension must be at least 2");
}

}  // namespace

FamilyPoint FamilyPoint::werner(double a, int d) {
  checkDim(d);
  checkCoordinate("a", a);
  return {Family::Werner, d, a, 0.0};
}

FamilyPoint FamilyPoint::isotropic(double b, int d) {
  checkDim(d);
  checkCoordinate("b", b);
  return {Family::Isotropic, d, 0.0, b};
}

FamilyPoint FamilyPoint::oo(double a, double b, int d) {
  checkDim(d);
  checkPair(a, b);
  return {Family::OO, d, a, b};
}

FamilyPoint FamilyPoint::ppWerner(double a, double b, int d) {
  checkDim(d);
  checkPair(a, b);
  return {Family::PPWerner, d, a, b};
}

FamilyPoint FamilyPoint::ppIsotropic(double a, double b, int d) {
  checkDim(d);
  checkPair(a, b);
  return {Family::PPIsotropic, d, a, b};
}

std::string FamilyPoint::describe() const {
  char buf[96];
  switch (family) {
    case Family::Werner:
      std::snprintf(buf, sizeof buf, "werner(a=%g, d=%d)", a, d);
      break;
    case Family::Isotropic:
      std::snprintf(buf, sizeof buf, "isotropic(b=%g, d=%d)", b, d);
      break;
    case Family::OO:
      std::snprintf(buf, sizeof buf, "oo(a=%g, b=%g, d=%d)", a, b, d);
      break;
    case Family::PPWerner:
      std::snprintf(buf, sizeof buf, "pp-werner(a=%g, b=%g, d=%d)", a, b, d);
      break;
    case Family::PPIsotropic:
      std::snprintf(buf, sizeof buf, "pp-isotropic(a=%g, b=%g, d=%d)", a, b, d);
      break;
  }
  return buf;
}

DensityMatrix family_to_density(const FamilyPoint& p) {
  const int d = p.d;
  const Matrix wminus = build_operator(SymmetricOperator::WMinus, d);
  const Matrix wplus = build_operator(SymmetricOperator::WPlus, d);
  const Matrix phi = build_operator(SymmetricOperator::PhiD, d);
  const Matrix q = build_operator(SymmetricOperator::Q, d);
  const Matrix id = Matrix::Identity(d * d, d * d);
  Matrix rho;
  switch (p.family) {
    case Family::Werner:
      rho = p.a / binom(d, 2) * wminus + (1.0 - p.a) / binom(d + 1, 2) * wplus;
      break;
    case Family::Isotropic:
      rho = p.b * phi + (1.0 - p.b) / (static_cast<double>(d) * d - 1.0) * (id - phi);
      break;
    case Family::OO:
      rho = p.a / binom(d, 2) * wminus + p.b * phi +
            (1.0 - p.a - p.b) / (binom(d + 1, 2) - 1.0) * (wplus - phi);
      break;
    case Family::PPWerner:
      rho = p.a / binom(d, 2) * wminus + p.b / binom(d, 2) * (wplus - q) +
            (1.0 - p.a - p.b) / d * q;
      break;
    case Family::PPIsotropic:
      rho = p.b * phi + p.a / (d - 1.0) * (q - phi) +
            (1.0 - p.a - p.b) / (static_cast<double>(d) * (d - 1.0)) * (id - q);
      break;
  }
  return DensityMatrix(std::move(rho), d, d);
}

FamilyPoint twirl(const DensityMatrix& rho, Family family) {
  const int d = rho.dimA();
  if (rho.dimB() != d) throw std::invalid_argument("twirl: state must live on C^d tensor C^d");
  const auto ev = [&](SymmetricOperator op) {
    return qcore::expectation(build_operator(op, d), rho);
  };
  switch (family) {
    case Family::Werner:
      return FamilyPoint::werner(std::clamp(ev(SymmetricOperator::WMinus), 0.0, 1.0), d);
    case Family::Isotropic:
      return FamilyPoint::isotropic(std::clamp(ev(SymmetricOperator::PhiD), 0.0, 1.0), d);
    case Family::OO:
      return FamilyPoint::oo(std::clamp(ev(SymmetricOperator::WMinus), 0.0, 1.0),
                             std::clamp(ev(SymmetricOperator::PhiD), 0.0, 1.0), d);
    case Family::PPWerner: {
      const double a = ev(SymmetricOperator::WMinus);
      const double b = ev(SymmetricOperator::WPlus) - ev(SymmetricOperator::Q);
      return FamilyPoint::ppWerner(std::clamp(a, 0.0, 1.0), std::clamp(b, 0.0, 1.0), d);
    }
    case Family::PPIsotropic: {
      const double b = ev(SymmetricOperator::PhiD);
      const double a = ev(SymmetricOperator::Q) - b;
      return FamilyPoint::ppIsotropic(std::clamp(a, 0.0, 1.0), std::clamp(b, 0.0, 1.0), d);
    }
  }
  throw std::logic_error("twirl: unreachable");
}

DensityMatrix twirl_to_density(const DensityMatrix& rho, Family family) {
  return family_to_density(twirl(rho, family));
}

bool is_separable(const FamilyPoint& p) {
  switch (p.family) {
    case Family::Werner:
      return p.a <= 0.5;
    case Family::Isotropic:
      return p.b <= 1.0 / p.d;
    case Family::OO:
      return p.a <= 0.5 && p.b <= 1.0 / p.d;
    case Family::PPWerner:
    case Family::PPIsotropic:
      throw std::invalid_argument(
          "is_separable: no closed separability boundary is available for " + p.describe());
  }
  throw std::logic_error("is_separable: unreachable");
}

GroupElement sample_group_element(Family family, int d, Rng& rng) {
  checkDim(d);
  switch (family) {
    case Family::Werner: {
      const Matrix u = qcore::haar_unitary(d, rng).matrix();
      return {u, u};
    }
    case Family::Isotropic: {
      const Matrix u = qcore::haar_unitary(d, rng).matrix();
      return {u, u.conjugate()};
    }
    case Family::OO: {
      const Matrix o = qcore::haar_orthogonal(d, rng).matrix();
      return {o, o};
    }
    case Family::PPWerner:
    case Family::PPIsotropic: {
      // Uniform permutation composed with independent uniform phases.
      std::vector<int> perm(static_cast<std::size_t>(d));
      std::iota(perm.begin(), perm.end(), 0);
      for (int i = d - 1; i > 0; --i)
        std::swap(perm[static_cast<std::size_t>(i)],
                  perm[rng.uniformInt(static_cast<std::uint64_t>(i) + 1)]);
      Matrix u = Matrix::Zero(d, d);
      for (int j = 0; j < d; ++j) {
        const double theta = 2.0 * M_PI * rng.uniform();
        u(perm[static_cast<std::size_t>(j)], j) = Complex(std::cos(theta), std::sin(theta));
      }
      return {u, family == Family::PPWerner ? u : u.conjugate()};
    }
  }
  throw std::logic_error("sample_group_element: unreachable");
}

Matrix conjugate_local(const Matrix& rho, const Matrix& a, const Matrix& b) {
  const int dA = static_cast<int>(a.rows());
  const int dB = static_cast<int>(b.rows());
  if (rho.rows() != static_cast<Eigen::Index>(dA) * dB || rho.cols() != rho.rows())
    throw std::invalid_argument("conjugate_local: dimension mismatch");
  // Contract one local index at a time; O(d^5) instead of O(d^6).
  auto applyLeft = [&](const Matrix& m, const Matrix& u, int dU, int dOther) {
    Matrix out = Matrix::Zero(m.rows(), m.cols());
    for (int i = 0; i < dU; ++i)
      for (int k = 0; k < dU; ++k) {
        const Complex c = u(i, k);
        if (c == Complex(0.0, 0.0)) continue;
        out.middleRows(static_cast<Eigen::Index>(i) * dOther, dOther) +=
            c * m.middleRows(static_cast<Eigen::Index>(k) * dOther, dOther);
      }
    return out;
  };
  auto applyRight = [&](const Matrix& m, const Matrix& u, int dU, int dOuter) {
    Matrix out = Matrix::Zero(m.rows(), m.cols());
    for (int blk = 0; blk < dOuter; ++blk)
      for (int i = 0; i < dU; ++i)
        for (int k = 0; k < dU; ++k) {
          const Complex c = u(i, k);
          if (c == Complex(0.0, 0.0)) continue;
          out.row(static_cast<Eigen::Index>(blk) * dU + i) +=
              c * m.row(static_cast<Eigen::Index>(blk) * dU + k);
        }
    return out;
  };
  Matrix m = applyLeft(rho, a, dA, dB);
  m = applyRight(m, b, dB, dA);
  // Conjugate from the right with the adjoints by transposing the same moves.
  m = m.adjoint().eval();
  m = applyLeft(m, a, dA, dB);
  m = applyRight(m, b, dB, dA);
  return m.adjoint();
}

}  // namespace symroof::families
