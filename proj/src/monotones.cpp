#include "symroof/monotones.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <numeric>

namespace symroof::monotones {

namespace {

double binom(int n, int k) {
  if (k < 0 || k > n) return 0.0;
  double out = 1.0;
  for (int i = 1; i <= k; ++i) out = out * (n - k + i) / i;
  return out;
}

}  // namespace

MonotoneSpec MonotoneSpec::vidal(int k) {
  if (k < 1) throw std::invalid_argument("MonotoneSpec::vidal: k must be >= 1");
  MonotoneSpec s;
  s.kind_ = MonotoneKind::Vidal;
  s.k_ = k;
  return s;
}

MonotoneSpec MonotoneSpec::renyi(double alpha) {
  if (!(alpha > 0.0) || alpha == 1.0)
    throw std::invalid_argument("MonotoneSpec::renyi: alpha must be positive and != 1");
  MonotoneSpec s;
  s.kind_ = MonotoneKind::Renyi;
  s.alpha_ = alpha;
  return s;
}

MonotoneSpec MonotoneSpec::entropyOfEntanglement() {
  MonotoneSpec s;
  s.kind_ = MonotoneKind::EntropyOfEntanglement;
  return s;
}

MonotoneSpec MonotoneSpec::concurrence(int k) {
  if (k < 2) throw std::invalid_argument("MonotoneSpec::concurrence: k must be >= 2");
  MonotoneSpec s;
  s.kind_ = MonotoneKind::Concurrence;
  s.k_ = k;
  return s;
}

MonotoneSpec MonotoneSpec::generalizedEntropy(std::function<double(double)> f,
                                              std::function<double(double)> fprime,
                                              bool assumeContinuous) {
  if (!f) throw std::invalid_argument("MonotoneSpec::generalizedEntropy: f is required");
  if (std::abs(f(0.0)) > 1e-12)
    throw std::invalid_argument("MonotoneSpec::generalizedEntropy: f(0) must vanish");
  MonotoneSpec s;
  s.kind_ = MonotoneKind::GeneralizedEntropy;
  s.f_ = std::move(f);
  s.fprime_ = std::move(fprime);
  s.continuous_ = assumeContinuous;
  return s;
}

bool MonotoneSpec::hasDerivative() const {
  return kind_ != MonotoneKind::GeneralizedEntropy || static_cast<bool>(fprime_);
}

std::string MonotoneSpec::name() const {
  switch (kind_) {
    case MonotoneKind::Vidal:
      return "vidal:" + std::to_string(k_);
    case MonotoneKind::Renyi: {
      char buf[32];
      std::snprintf(buf, sizeof buf, "renyi:%g", alpha_);
      return buf;
    }
    case MonotoneKind::EntropyOfEntanglement:
      return "entropy";
    case MonotoneKind::Concurrence:
      return "concurrence:" + std::to_string(k_);
    case MonotoneKind::GeneralizedEntropy:
      return "generalized-entropy";
  }
  return "unknown";
}

double MonotoneSpec::eval(const SchmidtVector& lambda) const {
  switch (kind_) {
    case MonotoneKind::Vidal:
      return vidal_ek(lambda, k_);
    case MonotoneKind::Renyi:
      return renyi_entropy(lambda, alpha_);
    case MonotoneKind::EntropyOfEntanglement:
      return entropy_of_entanglement(lambda);
    case MonotoneKind::Concurrence:
      return concurrence_ck(lambda, k_);
    case MonotoneKind::GeneralizedEntropy:
      return generalized_entropy(lambda, f_);
  }
  throw std::logic_error("MonotoneSpec::eval: unreachable");
}

double MonotoneSpec::f(double x) const {
  if (kind_ != MonotoneKind::GeneralizedEntropy)
    throw std::logic_error("MonotoneSpec::f: only defined for GeneralizedEntropy");
  return f_(x);
}

double MonotoneSpec::fprime(double x) const {
  if (kind_ == MonotoneKind::GeneralizedEntropy) {
    if (!fprime_)
      throw std::invalid_argument("MonotoneSpec::fprime: derivative handle not supplied");
    return fprime_(x);
  }
  switch (kind_) {
    case MonotoneKind::EntropyOfEntanglement:
      // Summand -x log2 x.
      return -(std::log2(std::max(x, 1e-300)) + 1.0 / std::numbers::ln2);
    default:
      throw std::invalid_argument("MonotoneSpec::fprime: monotone is not of sum form");
  }
}

std::vector<double> MonotoneSpec::gradient(const std::vector<double>& lambda) const {
  const int d = static_cast<int>(lambda.size());
  std::vector<double> g(lambda.size(), 0.0);
  switch (kind_) {
    case MonotoneKind::Vidal: {
      // Subgradient: indicator of not being among the k largest entries.
      std::vector<int> order(lambda.size());
      std::iota(order.begin(), order.end(), 0);
      std::stable_sort(order.begin(), order.end(),
                       [&](int i, int j) { return lambda[i] > lambda[j]; });
      for (int r = k_; r < d; ++r) g[static_cast<std::size_t>(order[r])] = 1.0;
      return g;
    }
    case MonotoneKind::Renyi: {
      double s = 0.0;
      for (double x : lambda) s += std::pow(std::max(x, 0.0), alpha_);
      const double c = alpha_ / ((1.0 - alpha_) * s * std::numbers::ln2);
      for (std::size_t i = 0; i < lambda.size(); ++i)
        g[i] = c * std::pow(std::max(lambda[i], 1e-300), alpha_ - 1.0);
      return g;
    }
    case MonotoneKind::EntropyOfEntanglement: {
      for (std::size_t i = 0; i < lambda.size(); ++i)
        g[i] = -(std::log2(std::max(lambda[i], 1e-300)) + 1.0 / std::numbers::ln2);
      return g;
    }
    case MonotoneKind::Concurrence: {
      // dC/dx_i = (d / binom^(1/k)) (1/k) S_k^(1/k - 1) S_{k-1}(x without i).
      const auto sk = elementary_symmetric(lambda, k_);
      const double Sk = sk[static_cast<std::size_t>(k_)];
      if (Sk <= 0.0) return g;  // flat at the boundary of the support
      const double scale =
          d / std::pow(binom(d, k_), 1.0 / k_) * std::pow(Sk, 1.0 / k_ - 1.0) / k_;
      for (std::size_t i = 0; i < lambda.size(); ++i) {
        // S_{k-1} of the vector with entry i removed, via the deflation
        // recurrence T_j = S_j - x_i T_{j-1}.
        double t = 1.0;
        for (int j = 1; j <= k_ - 1; ++j) t = sk[static_cast<std::size_t>(j)] - lambda[i] * t;
        g[i] = scale * t;
      }
      return g;
    }
    case MonotoneKind::GeneralizedEntropy: {
      if (!fprime_)
        throw std::invalid_argument("MonotoneSpec::gradient: derivative handle not supplied");
      for (std::size_t i = 0; i < lambda.size(); ++i) g[i] = fprime_(lambda[i]);
      return g;
    }
  }
  throw std::logic_error("MonotoneSpec::gradient: unreachable");
}

double vidal_ek(const SchmidtVector& lambda, int k) {
  if (k < 1) throw std::invalid_argument("vidal_ek: k must be >= 1");
  double tail = 0.0;
  for (int i = k; i < lambda.size(); ++i) tail += lambda[i];
  return tail;
}

double entropy_of_entanglement(const SchmidtVector& lambda) {
  double h = 0.0;
  for (int i = 0; i < lambda.size(); ++i) {
    const double x = lambda[i];
    if (x > 0.0) h -= x * std::log2(x);
  }
  return h;
}

double renyi_entropy(const SchmidtVector& lambda, double alpha) {
  if (!(alpha > 0.0) || alpha == 1.0)
    throw std::invalid_argument("renyi_entropy: alpha must be positive and != 1");
  double s = 0.0;
  for (int i = 0; i < lambda.size(); ++i) s += std::pow(lambda[i], alpha);
  return std::log2(s) / (1.0 - alpha);
}

std::vector<double> elementary_symmetric(const std::vector<double>& x, int kmax) {
  std::vector<double> e(static_cast<std::size_t>(kmax) + 1, 0.0);
  e[0] = 1.0;
  for (double v : x) {
    for (int j = std::min<int>(kmax, static_cast<int>(x.size())); j >= 1; --j)
      e[static_cast<std::size_t>(j)] += v * e[static_cast<std::size_t>(j - 1)];
  }
  return e;
}

double concurrence_ck(const SchmidtVector& lambda, int k) {
  const int d = lambda.size();
  if (k < 2 || k > d) throw std::invalid_argument("concurrence_ck: need 2 <= k <= d");
  const auto e = elementary_symmetric(lambda.data(), k);
  const double Sk = std::max(0.0, e[static_cast<std::size_t>(k)]);
  return d * std::pow(Sk / binom(d, k), 1.0 / k);
}

double generalized_entropy(const SchmidtVector& lambda,
                           const std::function<double(double)>& f) {
  if (!f) throw std::invalid_argument("generalized_entropy: f is required");
  if (std::abs(f(0.0)) > 1e-12)
    throw std::invalid_argument("generalized_entropy: f(0) must vanish");
  double s = 0.0;
  for (int i = 0; i < lambda.size(); ++i) s += f(lambda[i]);
  return s;
}

}  // namespace symroof::monotones
