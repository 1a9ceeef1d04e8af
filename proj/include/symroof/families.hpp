#pragma once
// Twirling-symmetric state families on C^d tensor C^d, their density
// matrices, exact twirl maps (projections onto the family), separability
// tests, and samplers for the underlying symmetry groups.

#include "symroof/qcore.hpp"

#include <string>

namespace symroof::families {

using qcore::DensityMatrix;
using qcore::Matrix;
using qcore::Rng;

enum class Family { Werner, Isotropic, OO, PPWerner, PPIsotropic };

// Coordinates of a family member. Single-parameter families use a (Werner) or
// b (Isotropic); two-parameter families use both, with a + b <= 1.
struct FamilyPoint {
  Family family;
  int d;
  double a = 0.0;
  double b = 0.0;

  static FamilyPoint werner(double a, int d);
  static FamilyPoint isotropic(double b, int d);
  static FamilyPoint oo(double a, double b, int d);
  static FamilyPoint ppWerner(double a, double b, int d);
  static FamilyPoint ppIsotropic(double a, double b, int d);

  std::string describe() const;
};

// Mixture of the family's orthogonal projectors with the point's weights.
// Reproduces the defining expectations exactly.
DensityMatrix family_to_density(const FamilyPoint& point);

// Coordinates of the group average of rho: the twirl fixes every commutant
// element's expectation, so the coordinates are operator expectations.
FamilyPoint twirl(const DensityMatrix& rho, Family family);
DensityMatrix twirl_to_density(const DensityMatrix& rho, Family family);

// Closed separability boundaries. Only Werner, Isotropic and OO have known
// ones; the phase-permutation families throw.
bool is_separable(const FamilyPoint& point);

// One Haar (or group-uniform) element of the family's symmetry group,
// returned as the pair (A, B) acting as A tensor B.
struct GroupElement {
  Matrix left;
  Matrix right;
};
GroupElement sample_group_element(Family family, int d, Rng& rng);

// (A tensor B) rho (A tensor B)^dag without forming the Kronecker product.
Matrix conjugate_local(const Matrix& rho, const Matrix& a, const Matrix& b);

}  // namespace symroof::families
