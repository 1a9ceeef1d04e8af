#pragma once
// Symmetric concave functions of Schmidt vectors: residual tail sums, Shannon
// and Renyi entropies (base 2 throughout), generalized concurrences built on
// elementary symmetric polynomials, and caller-supplied sum-form entropies.

#include "symroof/qcore.hpp"

#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace symroof::monotones {

using qcore::SchmidtVector;

enum class MonotoneKind { Vidal, Renyi, EntropyOfEntanglement, Concurrence, GeneralizedEntropy };

// Tagged description of a monotone. Built through the factory functions so the
// parameter domains are checked once, up front.
class MonotoneSpec {
 public:
  static MonotoneSpec vidal(int k);
  static MonotoneSpec renyi(double alpha);  // alpha > 0, alpha != 1
  static MonotoneSpec entropyOfEntanglement();
  static MonotoneSpec concurrence(int k);   // k >= 2
  // sum_i f(lambda_i) with f(0) = 0 (checked). The derivative is optional and
  // only required by gradient consumers; continuity is asserted by the caller
  // and gates extension-by-continuity paths.
  static MonotoneSpec generalizedEntropy(std::function<double(double)> f,
                                         std::function<double(double)> fprime = nullptr,
                                         bool assumeContinuous = false);

  MonotoneKind kind() const { return kind_; }
  int k() const { return k_; }
  double alpha() const { return alpha_; }
  bool continuous() const { return continuous_; }
  bool hasDerivative() const;
  std::string name() const;

  double eval(const SchmidtVector& lambda) const;
  // d eval / d lambda_i at an unsorted probability vector. For sorted-dependent
  // kinds the subgradient follows the descending ranking of the entries.
  std::vector<double> gradient(const std::vector<double>& lambda) const;

  // Scalar pieces of GeneralizedEntropy, used by the fiber-minimum classifier.
  double f(double x) const;
  double fprime(double x) const;

 private:
  MonotoneSpec() = default;

  MonotoneKind kind_ = MonotoneKind::Vidal;
  int k_ = 1;
  double alpha_ = 2.0;
  bool continuous_ = true;
  std::function<double(double)> f_;
  std::function<double(double)> fprime_;
};

// Sum of the entries ranked strictly below k (descending order).
double vidal_ek(const SchmidtVector& lambda, int k);
// -sum lambda log2 lambda with 0 log 0 = 0.
double entropy_of_entanglement(const SchmidtVector& lambda);
// log2(sum lambda^alpha) / (1 - alpha).
double renyi_entropy(const SchmidtVector& lambda, double alpha);
// d * (S_k(lambda) / binom(d, k))^(1/k) where S_k is the k-th elementary
// symmetric polynomial; equals 1 on the uniform vector.
double concurrence_ck(const SchmidtVector& lambda, int k);
// sum_i f(lambda_i); f(0) must vanish within 1e-12.
double generalized_entropy(const SchmidtVector& lambda, const std::function<double(double)>& f);

// S_0..S_kmax (S_0 = 1) by the iterative Vieta product; entry k is the k-th
// elementary symmetric polynomial. Numerically stable for d <= 64.
std::vector<double> elementary_symmetric(const std::vector<double>& x, int kmax);

}  // namespace symroof::monotones
