#include "symroof/roofs.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <stdexcept>
#include <utility>

namespace symroof::roofs {

namespace {

constexpr double kCoordTol = 1e-12;
constexpr double kEnvelopeTol = 1e-9;   // envelope-vs-curve equality threshold
constexpr double kCertTol = 1e-10;

double clamp01(double x, const char* what) {
  if (x < -kCoordTol || x > 1.0 + kCoordTol)
    throw std::domain_error(std::string(what) + " outside [0, 1]");
  return std::min(1.0, std::max(0.0, x));
}

double binaryEntropy(double x) {
  double h = 0.0;
  if (x > 0.0) h -= x * std::log2(x);
  if (x < 1.0) h -= (1.0 - x) * std::log2(1.0 - x);
  return h;
}

// Half-spread of the two-mode Werner fiber vector: lambda = 1/2 +- this.
double wernerSpread(double a) { return std::sqrt(std::max(0.0, a * (1.0 - a))); }

std::string formatProfile(const char* kind, const char* args) {
  return std::string(kind) + "(" + args + ")";
}

}  // namespace

// ---------------------------------------------------------------------------
// Envelope

EnvelopeFunction::EnvelopeFunction(std::vector<double> xs, std::vector<double> ys)
    : xs_(std::move(xs)), ys_(std::move(ys)) {}

double EnvelopeFunction::eval(double x) const {
  if (x < xs_.front() - 1e-9 || x > xs_.back() + 1e-9)
    throw std::domain_error("EnvelopeFunction::eval: argument outside sampled range");
  x = std::min(xs_.back(), std::max(xs_.front(), x));
  auto it = std::upper_bound(xs_.begin(), xs_.end(), x);
  std::size_t hi = std::min<std::size_t>(xs_.size() - 1,
                                         static_cast<std::size_t>(it - xs_.begin()));
  if (hi == 0) hi = 1;
  const std::size_t lo = hi - 1;
  const double w = (x - xs_[lo]) / (xs_[hi] - xs_[lo]);
  return ys_[lo] + w * (ys_[hi] - ys_[lo]);
}

EnvelopeFunction convex_envelope_1d(const std::vector<std::pair<double, double>>& samples) {
  if (samples.size() < 2)
    throw std::invalid_argument("convex_envelope_1d: need at least two samples");
  for (std::size_t i = 1; i < samples.size(); ++i)
    if (!(samples[i].first > samples[i - 1].first))
      throw std::invalid_argument("convex_envelope_1d: x must be strictly increasing");

  // Monotone chain on x-sorted points: keep counterclockwise turns only.
  std::vector<std::pair<double, double>> hull;
  hull.reserve(samples.size());
  for (const auto& p : samples) {
    while (hull.size() >= 2) {
      const auto& o = hull[hull.size() - 2];
      const auto& a = hull[hull.size() - 1];
      const double cross = (a.first - o.first) * (p.second - o.second) -
                           (a.second - o.second) * (p.first - o.first);
      if (cross <= 0.0)
        hull.pop_back();
      else
        break;
    }
    hull.push_back(p);
  }

  std::vector<double> xs(hull.size()), ys(hull.size());
  for (std::size_t i = 0; i < hull.size(); ++i) {
    xs[i] = hull[i].first;
    ys[i] = hull[i].second;
  }
  return EnvelopeFunction(std::move(xs), std::move(ys));
}

// ---------------------------------------------------------------------------
// Minimizer profiles

MinimizerProfile::MinimizerProfile(ProfileKind kind, double a, double t, int k,
                                   SchmidtVector schmidt)
    : kind_(kind), a_(a), t_(t), k_(k), schmidt_(std::move(schmidt)) {}

MinimizerProfile MinimizerProfile::wernerPsi(double a) {
  a = clamp01(a, "wernerPsi coordinate");
  const double h = wernerSpread(a);
  std::vector<double> lam = (a >= 0.5) ? std::vector<double>{0.5 + h, 0.5 - h}
                                       : std::vector<double>{1.0, 0.0};
  return MinimizerProfile(ProfileKind::WernerPsi, a, 0.0, 0,
                          SchmidtVector(std::move(lam)));
}

MinimizerProfile MinimizerProfile::isoTopHeavy(double t, int d) {
  if (d < 2) throw std::domain_error("isoTopHeavy: need d >= 2");
  if (t < 1.0 / d - 1e-9 || t > 1.0 + kCoordTol)
    throw std::domain_error("isoTopHeavy: t outside [1/d, 1]");
  t = std::min(1.0, std::max(1.0 / d, t));
  std::vector<double> lam(static_cast<std::size_t>(d), (1.0 - t) / (d - 1));
  lam[0] = t;
  return MinimizerProfile(ProfileKind::IsoTopHeavy, 0.0, t, 1,
                          SchmidtVector::fromUnsorted(std::move(lam)));
}

MinimizerProfile MinimizerProfile::isoTwoLevel(double t, int k, int d) {
  if (d < 2 || k < 1 || k >= d)
    throw std::domain_error("isoTwoLevel: need 1 <= k < d");
  if (t < 1.0 / d - 1e-9 || k * t > 1.0 + 1e-9)
    throw std::domain_error("isoTwoLevel: t outside [1/d, 1/k]");
  const double tail = std::max(0.0, (1.0 - k * t) / (d - k));
  std::vector<double> lam(static_cast<std::size_t>(d), tail);
  for (int i = 0; i < k; ++i) lam[static_cast<std::size_t>(i)] = t;
  return MinimizerProfile(ProfileKind::IsoTwoLevel, 0.0, t, k,
                          SchmidtVector::fromUnsorted(std::move(lam)));
}

MinimizerProfile MinimizerProfile::isoTruncated(double t, int k, int d) {
  if (d < 2 || k < 1 || k > d)
    throw std::domain_error("isoTruncated: need 1 <= k <= d");
  if (t < 1.0 / (k + 1) - 1e-9 || k * t > 1.0 + 1e-9)
    throw std::domain_error("isoTruncated: t outside [1/(k+1), 1/k]");
  std::vector<double> lam(static_cast<std::size_t>(d), 0.0);
  for (int i = 0; i < k; ++i) lam[static_cast<std::size_t>(i)] = t;
  if (k < d) lam[static_cast<std::size_t>(k)] = std::max(0.0, 1.0 - k * t);
  return MinimizerProfile(ProfileKind::IsoTruncated, 0.0, t, k,
                          SchmidtVector::fromUnsorted(std::move(lam)));
}

double MinimizerProfile::fiberCoordinate() const {
  if (kind_ == ProfileKind::WernerPsi) return a_;
  double s = 0.0;
  for (int i = 0; i < schmidt_.size(); ++i) s += std::sqrt(schmidt_[i]);
  return s * s / schmidt_.size();
}

PureState MinimizerProfile::state(int d) const {
  using qcore::Vector;
  if (kind_ == ProfileKind::WernerPsi) {
    if (d < 2) throw std::domain_error("MinimizerProfile::state: need d >= 2");
    Vector amp = Vector::Zero(static_cast<Eigen::Index>(d) * d);
    if (a_ >= 0.5) {
      const double h = wernerSpread(a_);
      amp(0 * d + 1) = std::sqrt(0.5 + h);
      amp(1 * d + 0) = -std::sqrt(0.5 - h);
    } else {
      // Product state on the fiber: (sqrt(2a)|1> + sqrt(1-2a)|2>) tensor |2>.
      amp(0 * d + 1) = std::sqrt(2.0 * a_);
      amp(1 * d + 1) = std::sqrt(1.0 - 2.0 * a_);
    }
    return PureState(std::move(amp), d, d);
  }
  if (d != schmidt_.size())
    throw std::domain_error("MinimizerProfile::state: iso profile dimension mismatch");
  return PureState::fromSchmidt(schmidt_, d);
}

std::string MinimizerProfile::describe() const {
  char buf[96];
  switch (kind_) {
    case ProfileKind::WernerPsi:
      std::snprintf(buf, sizeof buf, "a=%.12g", a_);
      return formatProfile("WernerPsi", buf);
    case ProfileKind::IsoTopHeavy:
      std::snprintf(buf, sizeof buf, "t=%.12g, d=%d", t_, schmidt_.size());
      return formatProfile("IsoTopHeavy", buf);
    case ProfileKind::IsoTwoLevel:
      std::snprintf(buf, sizeof buf, "t=%.12g, k=%d, d=%d", t_, k_, schmidt_.size());
      return formatProfile("IsoTwoLevel", buf);
    case ProfileKind::IsoTruncated:
      std::snprintf(buf, sizeof buf, "t=%.12g, k=%d, d=%d", t_, k_, schmidt_.size());
      return formatProfile("IsoTruncated", buf);
  }
  return "Unknown";
}

// ---------------------------------------------------------------------------
// Werner side

MinimizerProfile werner_minimizer(double a) { return MinimizerProfile::wernerPsi(a); }

double werner_fiber_value(const MonotoneSpec& spec, double a, int d) {
  if (d < 2) throw std::domain_error("werner_fiber_value: need d >= 2");
  const MinimizerProfile prof = werner_minimizer(a);
  std::vector<double> lam(static_cast<std::size_t>(d), 0.0);
  lam[0] = prof.schmidt()[0];
  lam[1] = prof.schmidt()[1];
  return spec.eval(SchmidtVector(std::move(lam)));
}

double roof_werner_via_envelope(const MonotoneSpec& spec, double a, int d, int gridPoints) {
  a = clamp01(a, "werner coordinate");
  if (gridPoints < 3) throw std::invalid_argument("roof_werner_via_envelope: grid too small");
  std::vector<std::pair<double, double>> samples;
  samples.reserve(static_cast<std::size_t>(gridPoints));
  for (int i = 0; i < gridPoints; ++i) {
    const double x = static_cast<double>(i) / (gridPoints - 1);
    samples.emplace_back(x, werner_fiber_value(spec, x, d));
  }
  return convex_envelope_1d(samples).eval(a);
}

double roof_werner(const MonotoneSpec& spec, double a, int d) {
  using monotones::MonotoneKind;
  a = clamp01(a, "werner coordinate");
  const double h = wernerSpread(a);
  switch (spec.kind()) {
    case MonotoneKind::Vidal:
      if (spec.k() >= 2) return 0.0;
      return std::max(0.0, 0.5 - h);
    case MonotoneKind::EntropyOfEntanglement:
      return a <= 0.5 ? 0.0 : binaryEntropy(0.5 - h);
    case MonotoneKind::Renyi: {
      const double alpha = spec.alpha();
      if (alpha > 1.0) {
        if (a <= 0.5) return 0.0;
        const double s = std::pow(0.5 + h, alpha) + std::pow(0.5 - h, alpha);
        return std::log2(s) / (1.0 - alpha);
      }
      if (alpha < 0.5) return std::max(0.0, 2.0 * a - 1.0);
      return roof_werner_via_envelope(spec, a, d);
    }
    case MonotoneKind::Concurrence:
    case MonotoneKind::GeneralizedEntropy:
      return roof_werner_via_envelope(spec, a, d);
  }
  throw std::logic_error("roof_werner: unhandled monotone kind");
}

// ---------------------------------------------------------------------------
// Isotropic closed forms

double iso_vidal_roof(int k, double b, int d) {
  if (k < 1) throw std::domain_error("iso_vidal_roof: need k >= 1");
  if (d < 2) throw std::domain_error("iso_vidal_roof: need d >= 2");
  b = clamp01(b, "isotropic coordinate");
  if (k >= d || d * b <= k) return 0.0;
  const double g = std::sqrt((1.0 - b) * k) - std::sqrt(b * (d - k));
  return g * g / d;
}

MinimizerProfile iso_vidal_minimizer(int k, double b, int d) {
  if (k < 1 || k >= d) throw std::domain_error("iso_vidal_minimizer: need 1 <= k < d");
  b = clamp01(b, "isotropic coordinate");
  if (d * b < k - 1e-9)
    throw std::domain_error("iso_vidal_minimizer: coordinate below the vanishing threshold k/d");
  const double tailSum = iso_vidal_roof(k, b, d);
  const double t = (1.0 - tailSum) / k;
  return MinimizerProfile::isoTwoLevel(t, k, d);
}

SchmidtVector iso_lambda_beta(double b, int d) {
  b = clamp01(b, "isotropic coordinate");
  if (d < 2) throw std::domain_error("iso_lambda_beta: need d >= 2");
  std::vector<double> lam(static_cast<std::size_t>(d));
  double prev = 1.0;  // tail sum at k = 0
  for (int k = 1; k <= d; ++k) {
    const double cur = (k < d) ? iso_vidal_roof(k, b, d) : 0.0;
    lam[static_cast<std::size_t>(k - 1)] = std::max(0.0, prev - cur);
    prev = cur;
  }
  return SchmidtVector::fromUnsorted(std::move(lam));
}

double iso_lower_bound_roof(const MonotoneSpec& spec, double b, int d) {
  return spec.eval(iso_lambda_beta(b, d));
}

// ---------------------------------------------------------------------------
// Berry machinery

BerryRegime classify_entropy_regime(const std::function<double(double)>& fprime) {
  if (!fprime) throw std::invalid_argument("classify_entropy_regime: missing derivative");
  constexpr int kPoints = 512;
  constexpr double kLo = 1e-4;
  constexpr double kHi = 0.5;
  constexpr double kTol = 1e-9;
  std::vector<double> phi(kPoints);
  for (int i = 0; i < kPoints; ++i) {
    const double x = kLo + (kHi - kLo) * (i + 0.5) / kPoints;
    phi[static_cast<std::size_t>(i)] = fprime(1.0 / (4.0 * x * x));
  }
  bool hasPos = false, hasNeg = false;
  for (int i = 1; i + 1 < kPoints; ++i) {
    const double s = phi[static_cast<std::size_t>(i + 1)] - 2.0 * phi[static_cast<std::size_t>(i)] +
                     phi[static_cast<std::size_t>(i - 1)];
    hasPos = hasPos || s > kTol;
    hasNeg = hasNeg || s < -kTol;
  }
  if (hasPos && hasNeg)
    throw std::domain_error(
        "classify_entropy_regime: mixed-sign second differences, regime indeterminate");
  if (hasPos) return BerryRegime::Convex;
  // A flat profile means both candidate extremizers coincide in value.
  return BerryRegime::Concave;
}

double iso_t_topheavy(double b, int d) {
  if (d < 2) throw std::domain_error("iso_t_topheavy: need d >= 2");
  b = clamp01(b, "isotropic coordinate");
  if (d * b < 1.0 - 1e-9) throw std::domain_error("iso_t_topheavy: need b >= 1/d");
  const double g = std::sqrt((1.0 - b)) - std::sqrt(b * (d - 1));
  return std::min(1.0, std::max(1.0 / d, 1.0 - g * g / d));
}

std::pair<double, int> iso_t_truncated(double b, int d) {
  if (d < 2) throw std::domain_error("iso_t_truncated: need d >= 2");
  b = clamp01(b, "isotropic coordinate");
  const double db = d * b;
  if (db < 1.0 - 1e-9) throw std::domain_error("iso_t_truncated: need b >= 1/d");
  // Round when d*b sits within 1e-9 of an integer, otherwise floor.
  int k = static_cast<int>(std::floor(db));
  if (std::abs(db - std::round(db)) <= 1e-9) k = static_cast<int>(std::round(db));
  k = std::max(1, std::min(d, k));
  if (k == d) return {1.0 / d, d};
  const double s = std::sqrt(db * k) + std::sqrt(k + 1.0 - db);
  const double t = s * s / (k * (k + 1.0) * (k + 1.0));
  return {t, k};
}

EntropyMinimum iso_entropy_minimum(const ScalarEntropy& f, double b, int d) {
  if (!f.f || !f.fprime)
    throw std::invalid_argument("iso_entropy_minimum: need both f and its derivative");
  if (d < 2) throw std::domain_error("iso_entropy_minimum: need d >= 2");
  b = clamp01(b, "isotropic coordinate");
  if (d * b < 1.0 - 1e-9)
    throw std::domain_error("iso_entropy_minimum: need b in [1/d, 1]");
  const BerryRegime regime = classify_entropy_regime(f.fprime);
  if (regime == BerryRegime::Concave) {
    const double t = iso_t_topheavy(b, d);
    const double value = f.f(t) + (d - 1) * f.f((1.0 - t) / (d - 1));
    return {value, MinimizerProfile::isoTopHeavy(t, d)};
  }
  const auto [t, k] = iso_t_truncated(b, d);
  const double rest = std::max(0.0, 1.0 - k * t);
  const double value = k * f.f(t) + f.f(rest);
  return {value, MinimizerProfile::isoTruncated(t, k, d)};
}

// ---------------------------------------------------------------------------
// Concurrence curves

double iso_c2_preenvelope(double b, int d) {
  if (d < 2) throw std::domain_error("iso_c2_preenvelope: need d >= 2");
  const double t = iso_t_topheavy(b, d);
  const double inner = std::max(0.0, (1.0 - t) * (d * (1.0 + t) - 2.0));
  return std::sqrt(static_cast<double>(d)) / (d - 1) * std::sqrt(inner);
}

double iso_cd_preenvelope(double b, int d) {
  if (d < 2) throw std::domain_error("iso_cd_preenvelope: need d >= 2");
  b = clamp01(b, "isotropic coordinate");
  if (b < 1.0 - 1.0 / d - 1e-9)
    throw std::domain_error("iso_cd_preenvelope: need b >= 1 - 1/d");
  const double s = std::sqrt((d - 1.0) * b) + std::sqrt(1.0 - b);
  const double t = s * s / (static_cast<double>(d) * (d - 1));
  const double inner = std::max(0.0, std::pow(t, d - 1) - (d - 1) * std::pow(t, d));
  return d * std::pow(inner, 1.0 / d);
}

double iso_c2_roof(double b, int d) {
  if (d < 2) throw std::domain_error("iso_c2_roof: need d >= 2");
  b = clamp01(b, "isotropic coordinate");
  return d * b <= 1.0 ? 0.0 : (d * b - 1.0) / (d - 1);
}

double iso_cd_roof(double b, int d) {
  if (d < 2) throw std::domain_error("iso_cd_roof: need d >= 2");
  b = clamp01(b, "isotropic coordinate");
  return b <= 1.0 - 1.0 / d ? 0.0 : d * b - d + 1.0;
}

// ---------------------------------------------------------------------------
// Fiber minimum and roof on the isotropic family

namespace {

// Zero-value fiber profile with at most floor(d b) + 1 nonzero entries.
MinimizerProfile isoZeroProfile(double b, int d) {
  const auto [t, k] = iso_t_truncated(b, d);
  return MinimizerProfile::isoTruncated(t, k, d);
}

// Berry regime of the power summand x^alpha: the second derivative of
// alpha (4x^2)^(1-alpha) in x carries the sign of (1-alpha)(1-2 alpha).
// Classified analytically so large alpha cannot overflow the sampler.
BerryRegime renyiRegime(double alpha) {
  const double sign = (1.0 - alpha) * (1.0 - 2.0 * alpha);
  return sign > 0.0 ? BerryRegime::Convex : BerryRegime::Concave;
}

}  // namespace

EntropyMinimum iso_fiber_minimum(const MonotoneSpec& spec, double b, int d) {
  using monotones::MonotoneKind;
  if (d < 2) throw std::domain_error("iso_fiber_minimum: need d >= 2");
  b = clamp01(b, "isotropic coordinate");
  if (d * b < 1.0 - 1e-9)
    throw std::domain_error("iso_fiber_minimum: need b >= 1/d");
  switch (spec.kind()) {
    case MonotoneKind::Vidal: {
      const int k = spec.k();
      const double value = iso_vidal_roof(k, b, d);
      if (k < d && d * b > k)
        return {value, iso_vidal_minimizer(k, b, d)};
      return {value, isoZeroProfile(b, d)};
    }
    case MonotoneKind::Concurrence: {
      const int k = spec.k();
      if (k == 2)
        return {iso_c2_preenvelope(b, d), MinimizerProfile::isoTopHeavy(iso_t_topheavy(b, d), d)};
      if (k == d) {
        if (b < 1.0 - 1.0 / d - 1e-12) return {0.0, isoZeroProfile(b, d)};
        const auto [t, kk] = iso_t_truncated(b, d);
        return {iso_cd_preenvelope(b, d), MinimizerProfile::isoTruncated(t, kk, d)};
      }
      throw std::invalid_argument(
          "iso_fiber_minimum: concurrence supported for k = 2 and k = d only");
    }
    case MonotoneKind::EntropyOfEntanglement: {
      ScalarEntropy f{
          [](double x) { return x > 0.0 ? -x * std::log2(x) : 0.0; },
          [](double x) { return -(std::log2(std::max(x, 1e-300)) + 1.0 / std::numbers::ln2); }};
      return iso_entropy_minimum(f, b, d);
    }
    case MonotoneKind::Renyi: {
      const double alpha = spec.alpha();
      if (std::abs(alpha - 0.5) <= 1e-12) {
        // Sum sqrt(lambda) is the fiber constraint itself, so the value is
        // constant: 2 log2(sqrt(d b)).
        return {std::log2(d * b), MinimizerProfile::isoTopHeavy(iso_t_topheavy(b, d), d)};
      }
      const BerryRegime regime = renyiRegime(alpha);
      const bool wantMaximum = alpha > 1.0;  // the 1/(1-alpha) prefactor flips
      const bool topHeavy = (regime == BerryRegime::Concave) != wantMaximum;
      MinimizerProfile prof = topHeavy
          ? MinimizerProfile::isoTopHeavy(iso_t_topheavy(b, d), d)
          : [&] {
              const auto [t, k] = iso_t_truncated(b, d);
              return MinimizerProfile::isoTruncated(t, k, d);
            }();
      return {monotones::renyi_entropy(prof.schmidt(), alpha), std::move(prof)};
    }
    case MonotoneKind::GeneralizedEntropy: {
      if (!spec.hasDerivative())
        throw std::invalid_argument(
            "iso_fiber_minimum: generalized entropy needs a derivative handle");
      ScalarEntropy f{[&spec](double x) { return spec.f(x); },
                      [&spec](double x) { return spec.fprime(x); }};
      return iso_entropy_minimum(f, b, d);
    }
  }
  throw std::logic_error("iso_fiber_minimum: unhandled monotone kind");
}

namespace {

// Fiber-minimum curve extended by zero below the separability threshold.
double isoCurveValue(const MonotoneSpec& spec, double b, int d) {
  if (d * b <= 1.0) return 0.0;
  return iso_fiber_minimum(spec, b, d).value;
}

MinimizerProfile isoCurveProfile(const MonotoneSpec& spec, double b, int d) {
  if (d * b <= 1.0) return MinimizerProfile::isoTopHeavy(1.0, d);
  return iso_fiber_minimum(spec, b, d).profile;
}

}  // namespace

RoofResult iso_roof(const MonotoneSpec& spec, double b, int d) {
  using monotones::MonotoneKind;
  if (d < 2) throw std::domain_error("iso_roof: need d >= 2");
  b = clamp01(b, "isotropic coordinate");
  switch (spec.kind()) {
    case MonotoneKind::Vidal: {
      // Closed form, convex in b: roof and curve coincide.
      const double value = iso_vidal_roof(spec.k(), b, d);
      return {value, value, isoCurveProfile(spec, b, d), false};
    }
    case MonotoneKind::Concurrence: {
      const int k = spec.k();
      if (k != 2 && k != d)
        throw std::invalid_argument("iso_roof: concurrence supported for k = 2 and k = d only");
      const double value = (k == 2) ? iso_c2_roof(b, d) : iso_cd_roof(b, d);
      const double curve = isoCurveValue(spec, b, d);
      return {value, curve, isoCurveProfile(spec, b, d), false};
    }
    case MonotoneKind::EntropyOfEntanglement:
    case MonotoneKind::Renyi:
    case MonotoneKind::GeneralizedEntropy: {
      constexpr int kGrid = 2001;
      std::vector<std::pair<double, double>> samples;
      samples.reserve(kGrid);
      for (int i = 0; i < kGrid; ++i) {
        const double x = static_cast<double>(i) / (kGrid - 1);
        samples.emplace_back(x, isoCurveValue(spec, x, d));
      }
      const double value = convex_envelope_1d(samples).eval(b);
      const double curve = isoCurveValue(spec, b, d);
      return {value, curve, isoCurveProfile(spec, b, d), false};
    }
  }
  throw std::logic_error("iso_roof: unhandled monotone kind");
}

// ---------------------------------------------------------------------------
// Region membership and the extended roof

Region region_membership(const FamilyPoint& point) {
  using families::Family;
  const double a = point.a;
  const double b = point.b;
  const int d = point.d;
  switch (point.family) {
    case Family::Werner:
      return Region::WernerOrbitRegion;
    case Family::Isotropic:
      return Region::IsoOrbitRegion;
    case Family::PPWerner:
      return a >= 0.5 - kCoordTol ? Region::WernerOrbitRegion : Region::Unknown;
    case Family::PPIsotropic:
      return d * b >= 1.0 - kCoordTol ? Region::IsoOrbitRegion : Region::Unknown;
    case Family::OO:
      if (a >= 0.5 - kCoordTol && b <= 2.0 * (1.0 - a) / d + kCoordTol)
        return Region::WernerOrbitRegion;
      if (d * b >= 1.0 - kCoordTol && a <= d * (1.0 - b) / (2.0 * (d - 1)) + kCoordTol)
        return Region::IsoOrbitRegion;
      return Region::Unknown;
  }
  throw std::logic_error("region_membership: unhandled family");
}

RoofResult extended_roof(const MonotoneSpec& spec, const FamilyPoint& point) {
  using families::Family;
  const Region region = region_membership(point);
  if (region == Region::Unknown)
    throw std::domain_error("extended_roof: point outside the covered orbit regions: " +
                            point.describe());

  RoofResult result = [&] {
    if (region == Region::WernerOrbitRegion) {
      const double value = roof_werner(spec, point.a, point.d);
      const double curve = werner_fiber_value(spec, point.a, point.d);
      return RoofResult{value, curve, werner_minimizer(point.a), false};
    }
    return iso_roof(spec, point.b, point.d);
  }();

  const bool onAxis = point.family == Family::Werner || point.family == Family::Isotropic;
  if (!onAxis && result.fiber_minimum - result.value > kEnvelopeTol) {
    // The 1-D roof departs from the fiber-minimum curve here; carrying it off
    // the family axis rests on continuity of the monotone.
    if (!spec.continuous())
      throw std::domain_error(
          "extended_roof: roof sits below the fiber curve at this coordinate and the "
          "monotone is not flagged continuous");
    result.via_continuity = true;
  }
  return result;
}

// ---------------------------------------------------------------------------
// Orbit membership certificates

namespace {

using qcore::Complex;
using qcore::Matrix;

// (U tensor V) psi on the amplitude matrix: M -> U M V^T.
PureState applyLocal(const Matrix& u, const Matrix& v, const PureState& psi) {
  const int d = psi.dimA();
  Matrix m(d, d);
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) m(i, j) = psi.amplitudes()(static_cast<Eigen::Index>(i) * d + j);
  const Matrix out = u * m * v.transpose();
  qcore::Vector amp(static_cast<Eigen::Index>(d) * d);
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) amp(static_cast<Eigen::Index>(i) * d + j) = out(i, j);
  return PureState(std::move(amp), d, d);
}

Matrix pairRotationBlock(int d, int j, int k) {
  // Acts as (1/sqrt2) [[1, 1], [i, -i]] on span{|j>, |k>}, identity elsewhere.
  Matrix u = Matrix::Identity(d, d);
  const double r = 1.0 / std::sqrt(2.0);
  u(j, j) = Complex(r, 0.0);
  u(j, k) = Complex(r, 0.0);
  u(k, j) = Complex(0.0, r);
  u(k, k) = Complex(0.0, -r);
  return u;
}

Matrix fourierMatrix(int d) {
  Matrix u(d, d);
  const double twoPi = 2.0 * std::numbers::pi;
  for (int j = 1; j <= d; ++j)
    for (int k = 1; k <= d; ++k) {
      const double phase = twoPi * static_cast<double>(j) * k / d;
      u(j - 1, k - 1) = Complex(std::cos(phase), std::sin(phase)) / std::sqrt(static_cast<double>(d));
    }
  return u;
}

CertificateEntry makeEntry(std::string label, Matrix u, bool conjugateRight,
                           const PureState& base,
                           std::vector<std::pair<SymmetricOperator, double>> predictions) {
  const int d = base.dimA();
  const Matrix right = conjugateRight ? Matrix(u.conjugate()) : u;
  const PureState rotated = applyLocal(u, right, base);
  std::vector<CertificateCheck> checks;
  checks.reserve(predictions.size());
  for (const auto& [op, predicted] : predictions) {
    const double achieved = qcore::expectation(qcore::build_operator(op, d), rotated);
    checks.push_back({op, predicted, achieved});
  }
  return {std::move(label), Unitary(std::move(u)), conjugateRight, std::move(checks)};
}

}  // namespace

OrbitCertificate orbit_membership_certificate(const FamilyPoint& point,
                                              const MinimizerProfile& profile) {
  using qcore::SymmetricOperator;
  const Region region = region_membership(point);
  if (region == Region::Unknown)
    throw std::domain_error("orbit_membership_certificate: uncovered region: " + point.describe());
  const int d = point.d;

  OrbitCertificate cert;
  if (region == Region::WernerOrbitRegion) {
    if (profile.kind() != ProfileKind::WernerPsi)
      throw std::invalid_argument("orbit_membership_certificate: expected a Werner profile");
    if (std::abs(profile.a() - point.a) > 1e-9)
      throw std::invalid_argument("orbit_membership_certificate: profile coordinate mismatch");
    if (point.a < 0.5 - kCoordTol)
      throw std::domain_error("orbit_membership_certificate: construction covers a >= 1/2");
    const double a = point.a;
    const PureState psi = profile.state(d);
    cert.entries.push_back(makeEntry("identity", Matrix::Identity(d, d), false, psi,
                                     {{SymmetricOperator::WMinus, a},
                                      {SymmetricOperator::Q, 0.0},
                                      {SymmetricOperator::PhiD, 0.0}}));
    cert.entries.push_back(makeEntry("two-level rotation", pairRotationBlock(d, 0, 1), false, psi,
                                     {{SymmetricOperator::WMinus, a},
                                      {SymmetricOperator::Q, 1.0 - a},
                                      {SymmetricOperator::PhiD, 2.0 * (1.0 - a) / d}}));
  } else {
    if (profile.kind() == ProfileKind::WernerPsi)
      throw std::invalid_argument("orbit_membership_certificate: expected an isotropic profile");
    if (std::abs(profile.fiberCoordinate() - point.b) > 1e-9)
      throw std::invalid_argument("orbit_membership_certificate: profile coordinate mismatch");
    const double b = point.b;
    const PureState phi = profile.state(d);
    const SchmidtVector& lam = profile.schmidt();

    cert.entries.push_back(makeEntry("identity", Matrix::Identity(d, d), true, phi,
                                     {{SymmetricOperator::Q, 1.0},
                                      {SymmetricOperator::PhiD, b},
                                      {SymmetricOperator::WMinus, 0.0}}));
    cert.entries.push_back(makeEntry("fourier", fourierMatrix(d), true, phi,
                                     {{SymmetricOperator::Q, b},
                                      {SymmetricOperator::PhiD, b}}));

    const int kEff = profile.kind() == ProfileKind::IsoTopHeavy ? 1 : profile.k();
    const int m = profile.kind() == ProfileKind::IsoTruncated
                      ? d / 2
                      : std::max(1, std::min(kEff, d - kEff));
    Matrix u = Matrix::Identity(d, d);
    double pairSum = 0.0;
    for (int j = 0; j < m; ++j) {
      u = pairRotationBlock(d, j, d - 1 - j) * u;
      const double diff = std::sqrt(lam[j]) - std::sqrt(lam[d - 1 - j]);
      pairSum += diff * diff / 2.0;
    }
    const double bound = d * (1.0 - b) / (2.0 * (d - 1));
    if (pairSum < bound - kCertTol)
      throw std::logic_error(
          "orbit_membership_certificate: pair rotations fall short of the region bound");
    cert.entries.push_back(makeEntry("pair rotations", std::move(u), true, phi,
                                     {{SymmetricOperator::WMinus, pairSum},
                                      {SymmetricOperator::PhiD, b}}));
  }

  cert.maxError = 0.0;
  for (const auto& entry : cert.entries)
    for (const auto& check : entry.checks)
      cert.maxError = std::max(cert.maxError, std::abs(check.predicted - check.achieved));
  cert.verified = cert.maxError <= kCertTol;
  return cert;
}

}  // namespace symroof::roofs
