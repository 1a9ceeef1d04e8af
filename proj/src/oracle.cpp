#include "symroof/oracle.hpp"

#include "fiber_manifold.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <functional>
#include <numeric>
#include <stdexcept>
#include <vector>

namespace symroof::oracle {
namespace {

using families::Family;
using qcore::Complex;
using qcore::Matrix;
using qcore::PureState;
using qcore::Rng;
using qcore::Vector;

void check_budget(const SearchBudget& b) {
  if (b.restarts < 1 || b.iterations < 1 || b.initialStep <= 0.0 ||
      b.stepDecay <= 0.0 || b.stepDecay >= 1.0 || b.decayInterval < 1)
    throw std::invalid_argument("oracle: malformed search budget");
}

qcore::SchmidtVector to_schmidt(std::vector<double> mu) {
  std::sort(mu.begin(), mu.end(), std::greater<double>());
  double sum = std::accumulate(mu.begin(), mu.end(), 0.0);
  for (double& t : mu) t /= sum;
  return qcore::SchmidtVector(std::move(mu));
}

// Schmidt vector of the point x on the sphere-plane slice.
qcore::SchmidtVector schmidt_of_x(const std::vector<double>& x) {
  std::vector<double> mu(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) mu[i] = x[i] * x[i];
  return to_schmidt(std::move(mu));
}

// Singular values squared of the d x d amplitude matrix, descending and
// normalized; values-only decomposition for hot paths.
qcore::SchmidtVector schmidt_values(const Vector& amplitudes, int d) {
  Eigen::Map<const Matrix> m(amplitudes.data(), d, d);
  Eigen::JacobiSVD<Matrix> svd(m);
  std::vector<double> mu(static_cast<std::size_t>(d));
  for (int i = 0; i < d; ++i) {
    const double s = svd.singularValues()(i);
    mu[static_cast<std::size_t>(i)] = s * s;
  }
  return to_schmidt(std::move(mu));
}

// Minimization problem restricted to the fiber slice in x coordinates.
struct FiberProblem {
  std::function<double(const std::vector<double>&)> value;
  // Gradient of value at x; empty means rescue directions only.
  std::function<std::vector<double>(const std::vector<double>&)> gradient;
};

struct FiberSearchResult {
  double value;
  std::vector<double> x;
};

// One descent run: projected (sub)gradient direction with golden line search,
// falling back to random tangent directions when the gradient direction
// stalls (kinks of piecewise-linear objectives). Non-improving iterations
// halve the trust step; the run stops after repeated failures.
FiberSearchResult descend_once(const FiberProblem& p, double s, int d,
                               const SearchBudget& budget, Rng rng,
                               std::vector<double> x0) {
  if (!detail::retract_sphere_plane(x0, s))
    x0 = detail::random_fiber_point(rng, d, s);
  std::vector<double> x = std::move(x0);
  double value = p.value(x);
  double step = budget.initialStep;
  int stall = 0;

  auto try_direction = [&](const std::vector<double>& dir, double lo, double hi) {
    const double n = detail::norm2(dir);
    if (n < 1e-14) return false;
    auto phi = [&](double eta) {
      std::vector<double> y = x;
      for (int i = 0; i < d; ++i) y[i] += (eta / n) * dir[i];
      if (!detail::retract_sphere_plane(y, s)) return value + 1.0;
      return p.value(y);
    };
    const double etaBest = detail::golden_min(phi, lo, hi);
    std::vector<double> y = x;
    for (int i = 0; i < d; ++i) y[i] += (etaBest / n) * dir[i];
    if (!detail::retract_sphere_plane(y, s)) return false;
    const double v = p.value(y);
    if (v < value - 1e-15) {
      x = std::move(y);
      value = v;
      return true;
    }
    return false;
  };

  for (int it = 0; it < budget.iterations; ++it) {
    bool improved = false;
    if (p.gradient) {
      std::vector<double> g = p.gradient(x);
      for (double& t : g) t = -t;  // descend
      improved = try_direction(detail::tangent_project(x, g), 0.0, step);
    }
    for (int attempt = 0; attempt < 4 && !improved; ++attempt) {
      std::vector<double> r(static_cast<std::size_t>(d));
      for (double& t : r) t = rng.gaussian();
      improved = try_direction(detail::tangent_project(x, r), -step, step);
    }
    if (improved) {
      stall = 0;
    } else {
      step *= budget.stepDecay;
      if (++stall >= 8 || step < 1e-13) break;
    }
  }
  return {value, x};
}

FiberSearchResult search_fiber(const FiberProblem& p, double s, int d,
                               const SearchBudget& budget,
                               const std::vector<std::vector<double>>& seeds) {
  const Rng root(budget.seed);
  FiberSearchResult best{0.0, {}};
  for (int r = 0; r < budget.restarts; ++r) {
    Rng rng = root.split(static_cast<std::uint64_t>(r));
    std::vector<double> x0 = r < static_cast<int>(seeds.size())
                                 ? seeds[static_cast<std::size_t>(r)]
                                 : detail::random_fiber_point(rng, d, s);
    FiberSearchResult run = descend_once(p, s, d, budget, rng, std::move(x0));
    if (best.x.empty() || run.value < best.value) best = std::move(run);
  }
  return best;
}

double fiber_s(double b, int d) {
  if (d < 2) throw std::invalid_argument("oracle: d must be at least 2");
  if (b < 1.0 / d - 1e-12 || b > 1.0 + 1e-12)
    throw std::invalid_argument("oracle: fiber coordinate b outside [1/d, 1]");
  return std::sqrt(std::clamp(b, 1.0 / d, 1.0) * d);
}

Vector swap_indices(const Vector& v, int d) {
  Vector out(d * d);
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) out(i * d + j) = v(j * d + i);
  return out;
}

}  // namespace

OracleEstimate min_on_iso_fiber(const MonotoneSpec& spec, double b, int d,
                                const SearchBudget& budget,
                                std::optional<double> closedForm) {
  check_budget(budget);
  const double s = fiber_s(b, d);
  FiberProblem problem;
  problem.value = [&spec](const std::vector<double>& x) {
    return spec.eval(schmidt_of_x(x));
  };
  problem.gradient = [&spec, d](const std::vector<double>& x) {
    std::vector<double> mu(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) mu[i] = x[i] * x[i];
    const std::vector<double> gmu = spec.gradient(mu);
    std::vector<double> g(x.size());
    for (int i = 0; i < d; ++i)
      g[static_cast<std::size_t>(i)] =
          2.0 * x[static_cast<std::size_t>(i)] * gmu[static_cast<std::size_t>(i)];
    return g;
  };
  const FiberSearchResult best = search_fiber(problem, s, d, budget, {});
  OracleEstimate out;
  out.value = best.value;
  out.argmin = schmidt_of_x(best.x).data();
  out.restartsUsed = budget.restarts;
  if (closedForm) out.gapToClosedForm = std::abs(best.value - *closedForm);
  return out;
}

OracleEstimate min_on_werner_fiber(const MonotoneSpec& spec, double a, int d,
                                   const SearchBudget& budget,
                                   std::optional<double> closedForm) {
  check_budget(budget);
  if (d < 2) throw std::invalid_argument("oracle: d must be at least 2");
  if (a < -1e-12 || a > 1.0 + 1e-12)
    throw std::invalid_argument("oracle: fiber coordinate a outside [0, 1]");
  a = std::clamp(a, 0.0, 1.0);

  // Explicit return types force evaluation while the swap temporary is alive;
  // a deduced Eigen expression type would dangle.
  const auto sym = [d](const Vector& v) -> Vector { return 0.5 * (v + swap_indices(v, d)); };
  const auto anti = [d](const Vector& v) -> Vector { return 0.5 * (v - swap_indices(v, d)); };
  const auto normalized_or = [](Vector v, const Vector& fallback) {
    const double n = v.norm();
    return n < 1e-12 ? fallback : Vector((1.0 / n) * v);
  };
  Vector symFallback = Vector::Zero(d * d);
  symFallback(0) = 1.0;  // |00>
  Vector antiFallback = Vector::Zero(d * d);
  antiFallback(0 * d + 1) = 1.0 / std::sqrt(2.0);
  antiFallback(1 * d + 0) = -1.0 / std::sqrt(2.0);

  const auto value_of = [&](const Vector& u, const Vector& v) {
    const Vector psi = std::sqrt(1.0 - a) * u + std::sqrt(a) * v;
    return spec.eval(schmidt_values(psi, d));
  };

  const Rng root(budget.seed);
  double bestValue = 0.0;
  Vector bestU, bestV;
  bool haveBest = false;
  for (int r = 0; r < budget.restarts; ++r) {
    Rng rng = root.split(static_cast<std::uint64_t>(r));
    const PureState start = qcore::fiber_state_werner(a, d, rng);
    Vector u = normalized_or(sym(start.amplitudes()), symFallback);
    Vector v = normalized_or(anti(start.amplitudes()), antiFallback);
    double value = value_of(u, v);
    double step = budget.initialStep;
    int stall = 0;
    for (int it = 0; it < budget.iterations && step > 1e-11; ++it) {
      const int mode = static_cast<int>(rng.uniformInt(3));
      Vector du = Vector::Zero(d * d), dv = Vector::Zero(d * d);
      if (mode != 1) {
        Vector g(d * d);
        for (int i = 0; i < d * d; ++i) g(i) = rng.complexGaussian();
        du = sym(g);
      }
      if (mode != 0) {
        Vector g(d * d);
        for (int i = 0; i < d * d; ++i) g(i) = rng.complexGaussian();
        dv = anti(g);
      }
      auto phi = [&](double eta) {
        const Vector uc = normalized_or(u + eta * du, u);
        const Vector vc = normalized_or(v + eta * dv, v);
        return value_of(uc, vc);
      };
      const double etaBest = detail::golden_min(phi, 0.0, step, 7, 16);
      const Vector uc = normalized_or(u + etaBest * du, u);
      const Vector vc = normalized_or(v + etaBest * dv, v);
      const double cand = value_of(uc, vc);
      if (cand < value - 1e-15) {
        u = uc;
        v = vc;
        value = cand;
        stall = 0;
      } else if (++stall >= 6) {
        step *= budget.stepDecay;
        stall = 0;
      }
    }
    if (!haveBest || value < bestValue) {
      bestValue = value;
      bestU = u;
      bestV = v;
      haveBest = true;
    }
  }

  OracleEstimate out;
  out.value = bestValue;
  const Vector psi = std::sqrt(1.0 - a) * bestU + std::sqrt(a) * bestV;
  out.argmin = schmidt_values(psi, d).data();
  out.restartsUsed = budget.restarts;
  if (closedForm) out.gapToClosedForm = std::abs(bestValue - *closedForm);
  return out;
}

DecompositionEstimate roof_upper_bound_by_decompositions(
    const FamilyPoint& point, const MonotoneSpec& spec, int ensembleSize,
    const SearchBudget& budget, std::optional<double> closedForm) {
  check_budget(budget);
  const qcore::DensityMatrix rho = families::family_to_density(point);
  const int d = point.d;
  const int d2 = d * d;

  std::vector<double> eigs;
  Matrix vecs;
  rho.eigensystem(eigs, vecs);
  std::vector<int> support;
  for (int i = 0; i < d2; ++i)
    if (eigs[static_cast<std::size_t>(i)] > 1e-12) support.push_back(i);
  const int rank = static_cast<int>(support.size());
  Matrix base(d2, rank);  // columns psi_i sqrt(q_i); sum of outer products is rho
  for (int c = 0; c < rank; ++c)
    base.col(c) = std::sqrt(eigs[static_cast<std::size_t>(support[static_cast<std::size_t>(c)])]) *
                  vecs.col(support[static_cast<std::size_t>(c)]);

  const int m = ensembleSize == 0 ? 2 * rank : ensembleSize;
  if (m < rank)
    throw std::invalid_argument("oracle: ensemble size below the state rank");

  struct Member {
    double weight;
    double entropy;
  };
  const auto member_of = [&](const Vector& col) -> Member {
    const double w = col.squaredNorm();
    if (w < 1e-28) return {0.0, 0.0};
    return {w, spec.eval(schmidt_values(col, d))};
  };

  const double pi = std::acos(-1.0);
  // One two-column rotation: coarse scan over relative phases and angles,
  // golden refinement of the winner, applied when it lowers the average.
  // Returns the improvement (0 when the pair is already optimal); a random
  // phase alone stalls well above the roof.
  const auto improve_pair = [&](Matrix& cols, std::vector<Member>& members,
                                double& total, int j, int l, double jitter) {
    const auto rotated = [&](const Complex& w, double theta) {
      const double c = std::cos(theta), s = std::sin(theta);
      const Vector aCol = c * cols.col(j) - (w * s) * cols.col(l);
      const Vector bCol = (std::conj(w) * s) * cols.col(j) + c * cols.col(l);
      return std::make_pair(aCol, bCol);
    };
    const auto pair_value = [&](const Complex& w, double theta) {
      const auto [aCol, bCol] = rotated(w, theta);
      const Member ma = member_of(aCol), mb = member_of(bCol);
      return ma.weight * ma.entropy + mb.weight * mb.entropy;
    };
    Complex wBest(1.0, 0.0);
    double thetaSeed = 0.0, scanBest = std::numeric_limits<double>::infinity();
    for (int p = 0; p < 4; ++p) {
      const double phase = 0.5 * pi * p + jitter;
      const Complex w(std::cos(phase), std::sin(phase));
      for (int t = 0; t < 9; ++t) {
        const double theta = -0.5 * pi + pi * t / 8.0;
        const double v = pair_value(w, theta);
        if (v < scanBest) {
          scanBest = v;
          wBest = w;
          thetaSeed = theta;
        }
      }
    }
    const auto theta_value = [&](double theta) { return pair_value(wBest, theta); };
    const double lo = std::max(-0.5 * pi, thetaSeed - 0.125 * pi);
    const double hi = std::min(0.5 * pi, thetaSeed + 0.125 * pi);
    const double thetaBest = detail::golden_min(theta_value, lo, hi, 9, 18);
    const double oldPair =
        members[static_cast<std::size_t>(j)].weight * members[static_cast<std::size_t>(j)].entropy +
        members[static_cast<std::size_t>(l)].weight * members[static_cast<std::size_t>(l)].entropy;
    const double newPair = theta_value(thetaBest);
    if (newPair >= oldPair - 1e-14) return 0.0;
    const auto [aCol, bCol] = rotated(wBest, thetaBest);
    cols.col(j) = aCol;
    cols.col(l) = bCol;
    members[static_cast<std::size_t>(j)] = member_of(aCol);
    members[static_cast<std::size_t>(l)] = member_of(bCol);
    total += newPair - oldPair;
    return oldPair - newPair;
  };

  const Rng root(budget.seed);
  double bestValue = 0.0;
  Matrix bestCols;
  bool haveBest = false;
  for (int r = 0; r < budget.restarts; ++r) {
    Rng rng = root.split(static_cast<std::uint64_t>(r));
    Matrix g(m, rank);
    for (int i = 0; i < m; ++i)
      for (int j = 0; j < rank; ++j) g(i, j) = rng.complexGaussian();
    Eigen::HouseholderQR<Matrix> qr(g);
    const Matrix isometry = qr.householderQ() * Matrix::Identity(m, rank);
    Matrix cols = base * isometry.transpose();  // completeness is preserved

    std::vector<Member> members(static_cast<std::size_t>(m));
    double total = 0.0;
    for (int j = 0; j < m; ++j) {
      members[static_cast<std::size_t>(j)] = member_of(cols.col(j));
      total += members[static_cast<std::size_t>(j)].weight *
               members[static_cast<std::size_t>(j)].entropy;
    }

    int stall = 0;
    for (int it = 0; it < budget.iterations && stall < 200; ++it) {
      const int j = static_cast<int>(rng.uniformInt(static_cast<std::uint64_t>(m)));
      int l = static_cast<int>(rng.uniformInt(static_cast<std::uint64_t>(m - 1)));
      if (l >= j) ++l;
      if (improve_pair(cols, members, total, j, l, 0.25 * pi * rng.uniform()) > 0.0)
        stall = 0;
      else
        ++stall;
    }
    if (!haveBest || total < bestValue) {
      bestValue = total;
      bestCols = cols;
      haveBest = true;
    }
  }

  // Deterministic sweeps over every column pair polish the winning ensemble
  // to its local optimum; random pair visits alone equalize slowly once the
  // rank grows.
  if (haveBest) {
    std::vector<Member> members(static_cast<std::size_t>(m));
    double total = 0.0;
    for (int j = 0; j < m; ++j) {
      members[static_cast<std::size_t>(j)] = member_of(bestCols.col(j));
      total += members[static_cast<std::size_t>(j)].weight *
               members[static_cast<std::size_t>(j)].entropy;
    }
    Rng rng = root.split(static_cast<std::uint64_t>(budget.restarts));
    for (int sweep = 0; sweep < 64; ++sweep) {
      double gain = 0.0;
      for (int j = 0; j < m; ++j)
        for (int l = j + 1; l < m; ++l)
          gain += improve_pair(bestCols, members, total, j, l, 0.25 * pi * rng.uniform());
      if (gain < 1e-12) break;
    }
    bestValue = total;
  }

  DecompositionEstimate out;
  out.value = bestValue;
  out.restartsUsed = budget.restarts;
  if (closedForm) out.gapToClosedForm = std::abs(bestValue - *closedForm);
  const qcore::SymmetricOperator coordOp =
      (point.family == Family::Isotropic || point.family == Family::PPIsotropic)
          ? qcore::SymmetricOperator::PhiD
          : qcore::SymmetricOperator::WMinus;
  const Matrix coordMat = qcore::build_operator(coordOp, d);
  for (int j = 0; j < bestCols.cols(); ++j) {
    const double w = bestCols.col(j).squaredNorm();
    if (w < 1e-14) continue;
    const Vector normalizedCol = bestCols.col(j) / std::sqrt(w);
    const PureState psi(normalizedCol, d, d);
    out.ensemble.push_back(
        {w, schmidt_values(normalizedCol, d), qcore::expectation(coordMat, psi)});
  }
  return out;
}

OracleEstimate witness_oracle(const SchmidtVector& lambda, double b, int d,
                              const SearchBudget& budget,
                              std::optional<double> closedForm) {
  check_budget(budget);
  const double s = fiber_s(b, d);
  if (lambda.size() > d)
    throw std::invalid_argument("oracle: lambda has more entries than d");
  std::vector<double> lamPrefix(static_cast<std::size_t>(d), 0.0);
  {
    double acc = 0.0;
    for (int i = 0; i < d; ++i) {
      if (i < lambda.size()) acc += lambda[i];
      lamPrefix[static_cast<std::size_t>(i)] = acc;
    }
  }

  // min over k < d of prefix_k(mu) - prefix_k(lambda); to be maximized.
  const auto objective = [&](const std::vector<double>& x) {
    std::vector<double> mu(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) mu[i] = x[i] * x[i];
    std::sort(mu.begin(), mu.end(), std::greater<double>());
    double acc = 0.0, best = 0.0;
    bool first = true;
    for (int k = 1; k < d; ++k) {
      acc += mu[static_cast<std::size_t>(k - 1)];
      const double fk = acc - lamPrefix[static_cast<std::size_t>(k - 1)];
      if (first || fk < best) {
        best = fk;
        first = false;
      }
    }
    return best;
  };

  FiberProblem problem;
  problem.value = [&objective](const std::vector<double>& x) { return -objective(x); };
  problem.gradient = [&, d](const std::vector<double>& x) {
    std::vector<int> order(x.size());
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&x](int i, int j) {
      return x[static_cast<std::size_t>(i)] * x[static_cast<std::size_t>(i)] >
             x[static_cast<std::size_t>(j)] * x[static_cast<std::size_t>(j)];
    });
    double acc = 0.0, best = 0.0;
    int bestK = 1;
    for (int k = 1; k < d; ++k) {
      acc += x[static_cast<std::size_t>(order[static_cast<std::size_t>(k - 1)])] *
             x[static_cast<std::size_t>(order[static_cast<std::size_t>(k - 1)])];
      const double fk = acc - lamPrefix[static_cast<std::size_t>(k - 1)];
      if (k == 1 || fk < best) {
        best = fk;
        bestK = k;
      }
    }
    std::vector<double> g(x.size(), 0.0);
    for (int r = 0; r < bestK; ++r) {
      const int idx = order[static_cast<std::size_t>(r)];
      g[static_cast<std::size_t>(idx)] = -2.0 * x[static_cast<std::size_t>(idx)];
    }
    return g;  // gradient of the negated objective
  };

  std::vector<std::vector<double>> seeds;
  seeds.emplace_back(static_cast<std::size_t>(d), 1.0);  // uniform after retraction
  std::vector<double> lamSeed(static_cast<std::size_t>(d), 0.0);
  for (int i = 0; i < lambda.size(); ++i)
    lamSeed[static_cast<std::size_t>(i)] = std::sqrt(lambda[i]);
  seeds.push_back(std::move(lamSeed));

  const FiberSearchResult best = search_fiber(problem, s, d, budget, seeds);
  OracleEstimate out;
  out.value = -best.value;
  out.argmin = schmidt_of_x(best.x).data();
  out.restartsUsed = budget.restarts;
  if (closedForm) out.gapToClosedForm = std::abs(out.value - *closedForm);
  return out;
}

}  // namespace symroof::oracle
