#include "symroof/qcore.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace symroof::qcore {

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

}  // namespace

Rng::Rng(std::uint64_t seed) : seed_(seed), state_(splitmix64(seed ^ 0x6a09e667f3bcc908ULL)) {}

Rng Rng::split(std::uint64_t tag) const {
  return Rng(splitmix64(seed_ ^ splitmix64(tag ^ 0xbb67ae8584caa73bULL)));
}

std::uint64_t Rng::nextRaw() {
  // xorshift* keeps the generator self-contained and identical on every platform.
  std::uint64_t x = state_;
  x ^= x >> 12;
  x ^= x << 25;
  x ^= x >> 27;
  state_ = x;
  return x * 0x2545f4914f6cdd1dULL;
}

double Rng::uniform() {
  return static_cast<double>(nextRaw() >> 11) * 0x1.0p-53;
}

double Rng::gaussian() {
  if (haveSpare_) {
    haveSpare_ = false;
    return spare_;
  }
  double u1 = 0.0;
  do {
    u1 = uniform();
  } while (u1 <= 0.0);
  const double u2 = uniform();
  const double r = std::sqrt(-2.0 * std::log(u1));
  const double theta = 2.0 * M_PI * u2;
  spare_ = r * std::sin(theta);
  haveSpare_ = true;
  return r * std::cos(theta);
}

Complex Rng::complexGaussian() {
  const double re = gaussian();
  const double im = gaussian();
  return {re, im};
}

std::uint64_t Rng::uniformInt(std::uint64_t n) {
  if (n == 0) throw std::invalid_argument("uniformInt: n must be positive");
  // Rejection sampling removes modulo bias.
  const std::uint64_t limit = UINT64_MAX - UINT64_MAX % n;
  std::uint64_t x = 0;
  do {
    x = nextRaw();
  } while (x >= limit);
  return x % n;
}

SchmidtVector::SchmidtVector(std::vector<double> entries) : entries_(std::move(entries)) {
  if (entries_.empty()) throw std::invalid_argument("SchmidtVector: empty");
  double sum = 0.0;
  for (std::size_t i = 0; i < entries_.size(); ++i) {
    if (entries_[i] < 0.0)
      throw std::invalid_argument("SchmidtVector: negative entry " + std::to_string(entries_[i]));
    if (i > 0 && entries_[i] > entries_[i - 1] + 1e-15)
      throw std::invalid_argument("SchmidtVector: entries not nonincreasing");
    sum += entries_[i];
  }
  if (std::abs(sum - 1.0) > kSumTol)
    throw std::invalid_argument("SchmidtVector: sum " + std::to_string(sum) + " != 1");
}

SchmidtVector SchmidtVector::fromUnsorted(std::vector<double> entries) {
  std::stable_sort(entries.begin(), entries.end(), std::greater<double>());
  return SchmidtVector(std::move(entries));
}

SchmidtVector SchmidtVector::normalized(std::vector<double> entries) {
  double sum = 0.0;
  for (double e : entries) {
    if (e < 0.0) throw std::invalid_argument("SchmidtVector::normalized: negative entry");
    sum += e;
  }
  if (sum <= 0.0) throw std::invalid_argument("SchmidtVector::normalized: nonpositive sum");
  for (double& e : entries) e /= sum;
  return fromUnsorted(std::move(entries));
}

SchmidtVector SchmidtVector::uniform(int d) {
  if (d < 1) throw std::invalid_argument("SchmidtVector::uniform: d must be positive");
  return SchmidtVector(std::vector<double>(static_cast<std::size_t>(d), 1.0 / d));
}

PureState::PureState(Vector amplitudes, int dimA, int dimB)
    : amp_(std::move(amplitudes)), dimA_(dimA), dimB_(dimB) {
  if (dimA_ < 1 || dimB_ < 1) throw std::invalid_argument("PureState: dims must be positive");
  if (amp_.size() != static_cast<Eigen::Index>(dimA_) * dimB_)
    throw std::invalid_argument("PureState: amplitude length does not match dims");
  const double norm = amp_.norm();
  if (std::abs(norm - 1.0) > 1e-10)
    throw std::invalid_argument("PureState: norm " + std::to_string(norm) + " != 1");
}

PureState PureState::fromSchmidt(const SchmidtVector& lambda, int d) {
  if (lambda.size() > d) throw std::invalid_argument("PureState::fromSchmidt: lambda longer than d");
  Vector amp = Vector::Zero(static_cast<Eigen::Index>(d) * d);
  for (int i = 0; i < lambda.size(); ++i) amp(static_cast<Eigen::Index>(i) * d + i) = std::sqrt(lambda[i]);
  amp /= amp.norm();
  return PureState(std::move(amp), d, d);
}

PureState PureState::haarRandom(int dimA, int dimB, Rng& rng) {
  Vector amp(static_cast<Eigen::Index>(dimA) * dimB);
  for (Eigen::Index i = 0; i < amp.size(); ++i) amp(i) = rng.complexGaussian();
  amp /= amp.norm();
  return PureState(std::move(amp), dimA, dimB);
}

DensityMatrix::DensityMatrix(Matrix rho, int dimA, int dimB)
    : rho_(std::move(rho)), dimA_(dimA), dimB_(dimB) {
  const Eigen::Index n = static_cast<Eigen::Index>(dimA_) * dimB_;
  if (rho_.rows() != n || rho_.cols() != n)
    throw std::invalid_argument("DensityMatrix: shape does not match dims");
  if ((rho_ - rho_.adjoint()).cwiseAbs().maxCoeff() > 1e-10)
    throw std::invalid_argument("DensityMatrix: not Hermitian");
  const double tr = rho_.trace().real();
  if (std::abs(tr - 1.0) > kSumTol)
    throw std::invalid_argument("DensityMatrix: trace " + std::to_string(tr) + " != 1");
  Eigen::SelfAdjointEigenSolver<Matrix> es(rho_, Eigen::EigenvaluesOnly);
  if (es.eigenvalues().minCoeff() < kPsdFloor)
    throw std::invalid_argument("DensityMatrix: negative eigenvalue " +
                                std::to_string(es.eigenvalues().minCoeff()));
}

DensityMatrix DensityMatrix::fromPure(const PureState& psi) {
  Matrix rho = psi.amplitudes() * psi.amplitudes().adjoint();
  return DensityMatrix(std::move(rho), psi.dimA(), psi.dimB());
}

void DensityMatrix::eigensystem(std::vector<double>& values, Matrix& vectors) const {
  Eigen::SelfAdjointEigenSolver<Matrix> es(rho_);
  values.resize(static_cast<std::size_t>(es.eigenvalues().size()));
  for (Eigen::Index i = 0; i < es.eigenvalues().size(); ++i)
    values[static_cast<std::size_t>(i)] = std::max(0.0, es.eigenvalues()(i));
  vectors = es.eigenvectors();
}

Unitary::Unitary(Matrix u) : u_(std::move(u)) {
  if (u_.rows() != u_.cols()) throw std::invalid_argument("Unitary: not square");
  const Matrix delta = u_ * u_.adjoint() - Matrix::Identity(u_.rows(), u_.cols());
  if (delta.cwiseAbs().maxCoeff() > kUnitaryTol)
    throw std::invalid_argument("Unitary: UU^dag deviates from identity by " +
                                std::to_string(delta.cwiseAbs().maxCoeff()));
}

Matrix build_operator(SymmetricOperator op, int d) {
  if (d < 2) throw std::invalid_argument("build_operator: d must be at least 2");
  const Eigen::Index n = static_cast<Eigen::Index>(d) * d;
  Matrix m = Matrix::Zero(n, n);
  auto idx = [d](int i, int j) { return static_cast<Eigen::Index>(i) * d + j; };
  switch (op) {
    case SymmetricOperator::Swap:
      for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j) m(idx(i, j), idx(j, i)) = 1.0;
      break;
    case SymmetricOperator::WPlus:
    case SymmetricOperator::WMinus: {
      const double sign = op == SymmetricOperator::WPlus ? 1.0 : -1.0;
      for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j) {
          m(idx(i, j), idx(i, j)) += 0.5;
          m(idx(i, j), idx(j, i)) += 0.5 * sign;
        }
      break;
    }
    case SymmetricOperator::PhiD:
      for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j) m(idx(i, i), idx(j, j)) = 1.0 / d;
      break;
    case SymmetricOperator::Q:
      for (int i = 0; i < d; ++i) m(idx(i, i), idx(i, i)) = 1.0;
      break;
  }
  return m;
}

SchmidtDecomposition schmidt_decompose(const PureState& psi) {
  const int dA = psi.dimA();
  const int dB = psi.dimB();
  Matrix amp(dA, dB);
  for (int i = 0; i < dA; ++i)
    for (int j = 0; j < dB; ++j) amp(i, j) = psi.amplitudes()(static_cast<Eigen::Index>(i) * dB + j);
  Eigen::JacobiSVD<Matrix> svd(amp, Eigen::ComputeFullU | Eigen::ComputeFullV);
  const int r = static_cast<int>(std::min(dA, dB));
  std::vector<double> lambda(static_cast<std::size_t>(r));
  for (int i = 0; i < r; ++i) {
    const double s = svd.singularValues()(i);
    lambda[static_cast<std::size_t>(i)] = s < kZeroSingular ? 0.0 : s * s;
  }
  // SVD returns singulars descending already; renormalize the tiny drift from
  // zeroing so the vector meets its own invariant.
  double sum = std::accumulate(lambda.begin(), lambda.end(), 0.0);
  if (std::abs(sum - 1.0) > kSumTol) {
    for (double& l : lambda) l /= sum;
  }
  SchmidtDecomposition out{SchmidtVector(std::move(lambda)), svd.matrixU(), svd.matrixV().conjugate()};

  // Reconstruction check: amp == U diag(s) UR^T.
  Matrix rebuilt = Matrix::Zero(dA, dB);
  for (int k = 0; k < r; ++k)
    rebuilt += svd.singularValues()(k) * out.localUnitaryLeft.col(k) *
               out.localUnitaryRight.col(k).transpose();
  if ((rebuilt - amp).cwiseAbs().maxCoeff() > kReconstructTol)
    throw std::runtime_error("schmidt_decompose: reconstruction residual too large");
  return out;
}

double expectation(const Matrix& op, const PureState& psi) {
  const Complex v = psi.amplitudes().adjoint() * op * psi.amplitudes();
  if (std::abs(v.imag()) > 1e-10)
    throw std::runtime_error("expectation: non-real value for pure state");
  return v.real();
}

double expectation(const Matrix& op, const DensityMatrix& rho) {
  const Complex v = (op * rho.matrix()).trace();
  if (std::abs(v.imag()) > 1e-10)
    throw std::runtime_error("expectation: non-real value for density matrix");
  return v.real();
}

bool majorizes(const SchmidtVector& x, const SchmidtVector& y) {
  const int n = std::max(x.size(), y.size());
  double px = 0.0;
  double py = 0.0;
  for (int k = 0; k < n - 1; ++k) {
    px += k < x.size() ? x[k] : 0.0;
    py += k < y.size() ? y[k] : 0.0;
    if (px < py - 1e-12) return false;
  }
  return true;
}

Unitary haar_unitary(int d, Rng& rng) {
  Matrix g(d, d);
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) g(i, j) = rng.complexGaussian();
  Eigen::HouseholderQR<Matrix> qr(g);
  Matrix q = qr.householderQ();
  const Matrix r = qr.matrixQR().triangularView<Eigen::Upper>();
  // Fixing the phases of R's diagonal makes the distribution Haar rather than
  // merely unitary (QR alone is not phase-invariant).
  for (int i = 0; i < d; ++i) {
    const Complex rii = r(i, i);
    const double mag = std::abs(rii);
    q.col(i) *= mag > 0 ? rii / mag : Complex(1.0, 0.0);
  }
  return Unitary(std::move(q));
}

Unitary haar_orthogonal(int d, Rng& rng) {
  Eigen::MatrixXd g(d, d);
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) g(i, j) = rng.gaussian();
  Eigen::HouseholderQR<Eigen::MatrixXd> qr(g);
  Eigen::MatrixXd q = qr.householderQ();
  const Eigen::MatrixXd r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (int i = 0; i < d; ++i) {
    if (r(i, i) < 0) q.col(i) *= -1.0;
  }
  return Unitary(q.cast<Complex>());
}

namespace {

PureState fiberState(double weight, const char* name, const Matrix& proj, int d, Rng& rng) {
  if (weight < 0.0 || weight > 1.0)
    throw std::invalid_argument(std::string(name) + ": coordinate outside [0, 1]");
  for (int attempt = 0; attempt < 64; ++attempt) {
    const PureState psi0 = PureState::haarRandom(d, d, rng);
    Vector inPart = proj * psi0.amplitudes();
    Vector outPart = psi0.amplitudes() - inPart;
    const double ni = inPart.norm();
    const double no = outPart.norm();
    if (ni < 1e-12 || no < 1e-12) continue;  // degenerate split; redraw
    Vector amp = std::sqrt(weight) * inPart / ni + std::sqrt(1.0 - weight) * outPart / no;
    amp /= amp.norm();
    return PureState(std::move(amp), d, d);
  }
  throw std::runtime_error(std::string(name) + ": could not split a Haar draw");
}

}  // namespace

PureState fiber_state_werner(double a, int d, Rng& rng) {
  return fiberState(a, "fiber_state_werner", build_operator(SymmetricOperator::WMinus, d), d, rng);
}

PureState fiber_state_isotropic(double b, int d, Rng& rng) {
  return fiberState(b, "fiber_state_isotropic", build_operator(SymmetricOperator::PhiD, d), d, rng);
}

}  // namespace symroof::qcore
