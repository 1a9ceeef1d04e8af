#pragma once
// Core layer: Schmidt decompositions, the symmetric two-party operators
// (swap projectors, maximally entangled projector, diagonal projector),
// Haar sampling, and pure states constrained to a fixed operator expectation.

#include <Eigen/Dense>

#include <complex>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace symroof::qcore {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;

// Library-wide tolerances. Constructors fail fast when these are violated.
inline constexpr double kSumTol = 1e-12;
inline constexpr double kPsdFloor = -1e-10;
inline constexpr double kUnitaryTol = 1e-10;
inline constexpr double kReconstructTol = 1e-10;
inline constexpr double kZeroSingular = 1e-12;

// Deterministic pseudo-random generator. Splittable: child generators are
// derived from (seed, tag) so parallel consumers never share a stream.
class Rng {
 public:
  explicit Rng(std::uint64_t seed);

  std::uint64_t seed() const { return seed_; }
  Rng split(std::uint64_t tag) const;

  double uniform();                 // [0, 1)
  double gaussian();                // standard normal
  Complex complexGaussian();        // independent N(0,1) real and imaginary parts
  std::uint64_t uniformInt(std::uint64_t n);  // {0, ..., n-1}

 private:
  std::uint64_t seed_;
  std::uint64_t state_;
  bool haveSpare_ = false;
  double spare_ = 0.0;

  std::uint64_t nextRaw();
};

// Probability vector of squared Schmidt coefficients: entries nonincreasing,
// nonnegative, summing to 1 within kSumTol.
class SchmidtVector {
 public:
  explicit SchmidtVector(std::vector<double> entries);

  // Stable descending sort, then validate.
  static SchmidtVector fromUnsorted(std::vector<double> entries);
  // Divides by the sum first; rejects nonpositive totals and negative entries.
  static SchmidtVector normalized(std::vector<double> entries);
  static SchmidtVector uniform(int d);

  int size() const { return static_cast<int>(entries_.size()); }
  double operator[](int i) const { return entries_[static_cast<std::size_t>(i)]; }
  const std::vector<double>& data() const { return entries_; }

 private:
  std::vector<double> entries_;
};

// Unit vector in C^{dimA} tensor C^{dimB}; amplitude of |i>|j> at index i*dimB + j.
class PureState {
 public:
  PureState(Vector amplitudes, int dimA, int dimB);

  static PureState fromSchmidt(const SchmidtVector& lambda, int d);  // sum_i sqrt(l_i) |ii>
  static PureState haarRandom(int dimA, int dimB, Rng& rng);

  int dimA() const { return dimA_; }
  int dimB() const { return dimB_; }
  const Vector& amplitudes() const { return amp_; }

 private:
  Vector amp_;
  int dimA_;
  int dimB_;
};

// Hermitian, PSD within an eigenvalue floor of kPsdFloor, unit trace within kSumTol.
class DensityMatrix {
 public:
  DensityMatrix(Matrix rho, int dimA, int dimB);

  static DensityMatrix fromPure(const PureState& psi);

  int dimA() const { return dimA_; }
  int dimB() const { return dimB_; }
  const Matrix& matrix() const { return rho_; }

  // Eigenvalues clipped to [0, inf) and renormalized vectors; ascending order.
  void eigensystem(std::vector<double>& values, Matrix& vectors) const;

 private:
  Matrix rho_;
  int dimA_;
  int dimB_;
};

enum class SymmetricOperator { Swap, WPlus, WMinus, PhiD, Q };

// UU^dag = 1 within kUnitaryTol.
class Unitary {
 public:
  explicit Unitary(Matrix u);
  int dim() const { return static_cast<int>(u_.rows()); }
  const Matrix& matrix() const { return u_; }

 private:
  Matrix u_;
};

struct SchmidtDecomposition {
  SchmidtVector lambda;
  Matrix localUnitaryLeft;    // columns are the left Schmidt basis
  Matrix localUnitaryRight;   // columns are the right Schmidt basis
};

// Operator matrices on C^d tensor C^d.
Matrix build_operator(SymmetricOperator op, int d);

// Squared singular values of the amplitude matrix, descending; singular values
// below kZeroSingular are zeroed. The returned bases reconstruct the state:
// psi = sum_i sqrt(lambda_i) (left_i tensor right_i) within kReconstructTol.
SchmidtDecomposition schmidt_decompose(const PureState& psi);

double expectation(const Matrix& op, const PureState& psi);
double expectation(const Matrix& op, const DensityMatrix& rho);

// True iff every prefix sum of x dominates the prefix sum of y (and totals
// agree within 1e-9). Shorter vectors are zero-padded.
bool majorizes(const SchmidtVector& x, const SchmidtVector& y);

Unitary haar_unitary(int d, Rng& rng);
// Haar-distributed real orthogonal matrix.
Unitary haar_orthogonal(int d, Rng& rng);

// Random pure state with <W_minus> = a: a Haar draw is split into its
// symmetric and antisymmetric components, each renormalized and recombined
// with weights sqrt(1-a), sqrt(a). Components with norm below 1e-12 trigger
// a redraw.
PureState fiber_state_werner(double a, int d, Rng& rng);
// Same construction for <Phi_d> = b using the maximally entangled projector.
PureState fiber_state_isotropic(double b, int d, Rng& rng);

}  // namespace symroof::qcore
