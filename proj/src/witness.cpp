#include "symroof/witness.hpp"

#include "fiber_manifold.hpp"
#include "symroof/roofs.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <vector>

namespace symroof::witness {
namespace {

using Eigen::MatrixXd;
using Eigen::VectorXd;
using qcore::Matrix;
using qcore::Rng;

constexpr double kNoGoBand = 1e-8;      // decision band around zero
constexpr double kFeasibleTol = 1e-9;   // accepted constraint violation
constexpr double kActiveBand = 1e-9;    // inequality counts as active

// g(x) = lin . x + qcoef * sum_{i in [quadLo, quadHi)} x_i^2 + offset <= 0.
struct Ineq {
  VectorXd lin;
  int quadLo = 0, quadHi = 0;
  double qcoef = 0.0;
  double offset = 0.0;

  double value(const VectorXd& x) const {
    double v = offset + (lin.size() > 0 ? lin.dot(x) : 0.0);
    for (int i = quadLo; i < quadHi; ++i) v += qcoef * x(i) * x(i);
    return v;
  }
  VectorXd grad(const VectorXd& x) const {
    VectorXd g = lin.size() > 0 ? lin : VectorXd(VectorXd::Zero(x.size()));
    for (int i = quadLo; i < quadHi; ++i) g(i) += 2.0 * qcoef * x(i);
    return g;
  }
};

// Region of subproblem k (1-based): descending order, nonnegativity, and the
// prefix-gap comparisons f_k <= f_l expanded to running-sum inequalities.
std::vector<Ineq> subproblem_constraints(const std::vector<double>& lam, int d, int k) {
  std::vector<Ineq> cons;
  for (int i = 0; i + 1 < d; ++i) {
    Ineq c;
    c.lin = VectorXd::Zero(d);
    c.lin(i + 1) = 1.0;
    c.lin(i) = -1.0;
    cons.push_back(std::move(c));
  }
  {
    Ineq c;
    c.lin = VectorXd::Zero(d);
    c.lin(d - 1) = -1.0;
    cons.push_back(std::move(c));
  }
  for (int l = 1; l < k; ++l) {  // f_k <= f_l, l < k: sum_{i=l+1}^{k} mu_i <= same of lambda
    Ineq c;
    c.quadLo = l;
    c.quadHi = k;
    c.qcoef = 1.0;
    for (int i = l; i < k; ++i) c.offset -= lam[static_cast<std::size_t>(i)];
    cons.push_back(std::move(c));
  }
  for (int l = k + 1; l < d; ++l) {  // f_k <= f_l, l > k: sum_{i=k+1}^{l} mu_i >= same of lambda
    Ineq c;
    c.quadLo = k;
    c.quadHi = l;
    c.qcoef = -1.0;
    for (int i = k; i < l; ++i) c.offset += lam[static_cast<std::size_t>(i)];
    cons.push_back(std::move(c));
  }
  return cons;
}

VectorXd retract_vec(VectorXd x, double s) {
  std::vector<double> v(x.data(), x.data() + x.size());
  if (!detail::retract_sphere_plane(v, s)) {
    std::fill(v.begin(), v.end(), s / static_cast<double>(x.size()));
    detail::retract_sphere_plane(v, s);
  }
  return Eigen::Map<VectorXd>(v.data(), x.size());
}

VectorXd tangent_vec(const VectorXd& x, const VectorXd& g) {
  std::vector<double> xv(x.data(), x.data() + x.size());
  std::vector<double> gv(g.data(), g.data() + g.size());
  std::vector<double> t = detail::tangent_project(xv, gv);
  return Eigen::Map<VectorXd>(t.data(), x.size());
}

double max_violation(const std::vector<Ineq>& cons, const VectorXd& x) {
  double mv = 0.0;
  for (const Ineq& c : cons) mv = std::max(mv, c.value(x));
  return mv;
}

// Phase one: minimize the squared violation of the inequalities over the
// sphere-plane slice. Ends either feasible or stuck at a positive floor.
VectorXd find_feasible(const std::vector<Ineq>& cons, double s, int d, VectorXd x) {
  x = retract_vec(std::move(x), s);
  const auto violation2 = [&](const VectorXd& y) {
    double v = 0.0;
    for (const Ineq& c : cons) {
      const double g = c.value(y);
      if (g > 0.0) v += g * g;
    }
    return v;
  };
  double v = violation2(x);
  double step = 0.5;
  int stall = 0;
  for (int it = 0; it < 500 && v > 1e-22 && step > 1e-14; ++it) {
    VectorXd g = VectorXd::Zero(d);
    for (const Ineq& c : cons) {
      const double gv = c.value(x);
      if (gv > 0.0) g += (2.0 * gv) * c.grad(x);
    }
    const VectorXd t = tangent_vec(x, g);
    const double tn = t.norm();
    bool improved = false;
    if (tn > 1e-16) {
      auto phi = [&](double eta) { return violation2(retract_vec(x - (eta / tn) * t, s)); };
      const double etaBest = detail::golden_min(phi, 0.0, step, 9, 20);
      VectorXd y = retract_vec(x - (etaBest / tn) * t, s);
      const double vy = violation2(y);
      if (vy < v - 1e-24) {
        x = std::move(y);
        v = vy;
        improved = true;
      }
    }
    if (improved) {
      stall = 0;
    } else {
      step *= 0.5;
      if (++stall >= 12) break;
    }
  }
  return x;
}

// Newton restoration onto {sum x = s, sum x^2 = 1, g_j = 0 for j active}.
bool restore_active(VectorXd& y, const std::vector<Ineq>& cons,
                    const std::vector<int>& act, double s) {
  const int d = static_cast<int>(y.size());
  const int rows = 2 + static_cast<int>(act.size());
  for (int it = 0; it < 24; ++it) {
    VectorXd c(rows);
    c(0) = y.sum() - s;
    c(1) = y.squaredNorm() - 1.0;
    for (int i = 0; i < static_cast<int>(act.size()); ++i)
      c(2 + i) = cons[static_cast<std::size_t>(act[static_cast<std::size_t>(i)])].value(y);
    if (c.lpNorm<Eigen::Infinity>() < 1e-12) return true;
    MatrixXd j(rows, d);
    j.row(0).setOnes();
    j.row(1) = 2.0 * y.transpose();
    for (int i = 0; i < static_cast<int>(act.size()); ++i)
      j.row(2 + i) =
          cons[static_cast<std::size_t>(act[static_cast<std::size_t>(i)])].grad(y).transpose();
    Eigen::CompleteOrthogonalDecomposition<MatrixXd> cod(j);
    y -= cod.solve(c);
    if (!y.allFinite()) return false;
  }
  return false;
}

struct AscentOutcome {
  VectorXd x;
  double objective = 0.0;
  double kktResidual = 0.0;
  double maxViolation = 0.0;
};

// Phase two: projected-gradient ascent of sum_{i<k} x_i^2 with an active-set
// treatment of the inequalities; constraints with negative multiplier
// estimates are released one at a time.
AscentOutcome ascend(const std::vector<Ineq>& cons, double s, int d, int k,
                     VectorXd x, int iterations) {
  const auto objective = [&](const VectorXd& y) {
    double f = 0.0;
    for (int i = 0; i < k; ++i) f += y(i) * y(i);
    return f;
  };
  const auto obj_grad = [&](const VectorXd& y) {
    VectorXd g = VectorXd::Zero(d);
    for (int i = 0; i < k; ++i) g(i) = 2.0 * y(i);
    return g;
  };

  double f = objective(x);
  double step = 0.25;
  int released = -1;

  const auto active_set = [&](const VectorXd& y, int skip) {
    std::vector<int> act;
    for (int j = 0; j < static_cast<int>(cons.size()); ++j)
      if (j != skip && cons[static_cast<std::size_t>(j)].value(y) >= -kActiveBand)
        act.push_back(j);
    return act;
  };
  const auto jac = [&](const VectorXd& y, const std::vector<int>& act) {
    MatrixXd j(2 + static_cast<int>(act.size()), d);
    j.row(0).setOnes();
    j.row(1) = 2.0 * y.transpose();
    for (int i = 0; i < static_cast<int>(act.size()); ++i)
      j.row(2 + i) =
          cons[static_cast<std::size_t>(act[static_cast<std::size_t>(i)])].grad(y).transpose();
    return j;
  };

  for (int outer = 0; outer < iterations; ++outer) {
    const std::vector<int> act = active_set(x, released);
    released = -1;
    const MatrixXd j = jac(x, act);
    const VectorXd gf = obj_grad(x);
    Eigen::CompleteOrthogonalDecomposition<MatrixXd> cod(MatrixXd(j.transpose()));
    const VectorXd nu = cod.solve(gf);
    const VectorXd resid = gf - j.transpose() * nu;
    const double rn = resid.norm();

    if (rn <= 1e-10) {
      // Stationary on the active face; release a wrong-signed multiplier.
      int worst = -1;
      double worstVal = -1e-8;
      for (int i = 0; i < static_cast<int>(act.size()); ++i)
        if (nu(2 + i) < worstVal) {
          worstVal = nu(2 + i);
          worst = act[static_cast<std::size_t>(i)];
        }
      if (worst < 0) break;  // KKT point
      released = worst;
      continue;
    }

    bool moved = false;
    double eta = step;
    for (int ls = 0; ls < 45 && !moved; ++ls, eta *= 0.5) {
      VectorXd y = x + (eta / rn) * resid;
      if (!restore_active(y, cons, act, s)) continue;
      bool nonneg = true;
      for (int i = 0; i < d; ++i)
        if (y(i) < -1e-12) nonneg = false;
      if (!nonneg || max_violation(cons, y) > kFeasibleTol) continue;
      const double fy = objective(y);
      if (fy > f + 1e-16) {
        x = std::move(y);
        f = fy;
        moved = true;
        step = std::min(0.25, eta * 2.0);
      }
    }
    if (!moved) {
      step *= 0.5;
      if (step < 1e-13) break;
    }
  }

  AscentOutcome out;
  out.objective = objective(x);
  out.maxViolation = max_violation(cons, x);
  const std::vector<int> act = active_set(x, -1);
  const MatrixXd j = jac(x, act);
  const VectorXd gf = obj_grad(x);
  Eigen::CompleteOrthogonalDecomposition<MatrixXd> cod(MatrixXd(j.transpose()));
  VectorXd nu = cod.solve(gf);
  for (int i = 0; i < static_cast<int>(act.size()); ++i)
    nu(2 + i) = std::max(0.0, nu(2 + i));  // admissible multipliers only
  out.kktResidual = (gf - j.transpose() * nu).norm() + std::max(0.0, out.maxViolation);
  out.x = std::move(x);
  return out;
}

std::vector<VectorXd> subproblem_starts(const std::vector<double>& lam, double b,
                                        int d, int k, int restarts, Rng& rng) {
  std::vector<VectorXd> starts;
  const auto from_schmidt = [&](const std::vector<double>& mu) {
    VectorXd x(d);
    for (int i = 0; i < d; ++i) x(i) = std::sqrt(std::max(0.0, mu[static_cast<std::size_t>(i)]));
    std::sort(x.data(), x.data() + d, std::greater<double>());
    return x;
  };
  try {
    starts.push_back(from_schmidt(roofs::iso_vidal_minimizer(k, b, d).schmidt().data()));
  } catch (const std::exception&) {
  }
  try {
    starts.push_back(from_schmidt(roofs::iso_lambda_beta(b, d).data()));
  } catch (const std::exception&) {
  }
  starts.push_back(VectorXd::Constant(d, 1.0));
  starts.push_back(from_schmidt(lam));
  {
    VectorXd x = VectorXd::Constant(d, 0.05);
    for (int i = 0; i < k; ++i) x(i) = 1.0;
    starts.push_back(x);
  }
  while (static_cast<int>(starts.size()) < restarts) {
    VectorXd x(d);
    for (int i = 0; i < d; ++i) x(i) = std::abs(rng.gaussian());
    std::sort(x.data(), x.data() + d, std::greater<double>());
    starts.push_back(x);
  }
  starts.resize(static_cast<std::size_t>(restarts));
  return starts;
}

}  // namespace

double wootters_concurrence(const DensityMatrix& rho) {
  if (rho.dimA() != 2 || rho.dimB() != 2)
    throw std::invalid_argument("wootters_concurrence: state is not two qubits");
  Matrix yy = Matrix::Zero(4, 4);
  yy(0, 3) = -1.0;
  yy(1, 2) = 1.0;
  yy(2, 1) = 1.0;
  yy(3, 0) = -1.0;
  const Matrix flipped = yy * rho.matrix().conjugate() * yy;
  Eigen::ComplexEigenSolver<Matrix> es(rho.matrix() * flipped);
  std::vector<double> nu(4);
  for (int i = 0; i < 4; ++i) nu[static_cast<std::size_t>(i)] = std::max(0.0, es.eigenvalues()(i).real());
  std::sort(nu.begin(), nu.end(), std::greater<double>());
  const double c = std::sqrt(nu[0]) - std::sqrt(nu[1]) - std::sqrt(nu[2]) - std::sqrt(nu[3]);
  return std::max(0.0, c);
}

WitnessResult pure_to_two_qubit(const SchmidtVector& lambda, const DensityMatrix& rho) {
  const double c = wootters_concurrence(rho);
  const double targetRoof = 0.5 * (1.0 - std::sqrt(std::max(0.0, 1.0 - c * c)));
  WitnessResult out;
  out.value = (1.0 - lambda[0]) - targetRoof;
  out.verdict = out.value >= -1e-10 ? Verdict::Go : Verdict::NoGo;
  out.diagnostics.onBoundary = std::abs(out.value) <= kNoGoBand;
  return out;
}

WitnessResult pure_to_werner(const SchmidtVector& lambda, double a) {
  if (a < -1e-12 || a > 1.0 + 1e-12)
    throw std::invalid_argument("pure_to_werner: a outside [0, 1]");
  a = std::clamp(a, 0.0, 1.0);
  WitnessResult out;
  if (a <= 0.5) {  // separable target: every source converts
    out.value = 1.0 - lambda[0];
    out.verdict = Verdict::Go;
  } else {
    const double threshold = 0.5 + std::sqrt(a * (1.0 - a));
    out.value = threshold - lambda[0];
    out.verdict = lambda[0] <= threshold + 1e-12 ? Verdict::Go : Verdict::NoGo;
  }
  out.diagnostics.onBoundary = std::abs(out.value) <= kNoGoBand;
  return out;
}

WitnessResult pure_to_isotropic_nogo(const SchmidtVector& lambda, double b, int d,
                                     const WitnessBudget& budget) {
  if (d < 2) throw std::invalid_argument("pure_to_isotropic_nogo: d must be at least 2");
  if (lambda.size() > d)
    throw std::invalid_argument("pure_to_isotropic_nogo: lambda has more entries than d");
  if (budget.restarts < 1 || budget.iterations < 1)
    throw std::invalid_argument("pure_to_isotropic_nogo: malformed budget");
  if (b < -1e-12 || b > 1.0 + 1e-12)
    throw std::invalid_argument("pure_to_isotropic_nogo: b outside [0, 1]");

  WitnessResult out;
  if (b < 1.0 / d - 1e-12) {  // separable target: every source converts
    out.value = 0.0;
    out.verdict = Verdict::Go;
    return out;
  }
  b = std::clamp(b, 1.0 / d, 1.0);
  const double s = std::sqrt(b * d);

  std::vector<double> lam(static_cast<std::size_t>(d), 0.0);
  for (int i = 0; i < lambda.size(); ++i) lam[static_cast<std::size_t>(i)] = lambda[i];
  std::vector<double> lamPrefix(static_cast<std::size_t>(d), 0.0);
  {
    double acc = 0.0;
    for (int i = 0; i < d; ++i) {
      acc += lam[static_cast<std::size_t>(i)];
      lamPrefix[static_cast<std::size_t>(i)] = acc;
    }
  }

  // At b = 1 the sphere-plane slice has radius zero: the fiber is the single
  // uniform vector. Tolerance-based ascent cannot resolve a zero-radius
  // manifold below ~sqrt(feasibility tolerance), so evaluate it exactly.
  const bool pointFiber = b >= 1.0 - 1e-14;

  const Rng root(budget.seed);
  for (int k = 1; k < d; ++k) {
    const std::vector<Ineq> cons = subproblem_constraints(lam, d, k);
    if (pointFiber) {
      SubproblemReport rep;
      rep.k = k;
      const VectorXd uniformX =
          VectorXd::Constant(d, 1.0 / std::sqrt(static_cast<double>(d)));
      if (max_violation(cons, uniformX) <= kFeasibleTol) {
        rep.feasible = true;
        rep.kktResidual = 0.0;
        rep.maxViolation = 0.0;
        rep.optimum = static_cast<double>(k) / d -
                      lamPrefix[static_cast<std::size_t>(k - 1)];
      }
      out.perK.push_back(rep);
      continue;
    }
    Rng rng = root.split(static_cast<std::uint64_t>(k));
    const std::vector<VectorXd> starts =
        subproblem_starts(lam, b, d, k, budget.restarts, rng);

    SubproblemReport rep;
    rep.k = k;
    double bestF = -std::numeric_limits<double>::infinity();
    for (const VectorXd& x0 : starts) {
      VectorXd x = find_feasible(cons, s, d, x0);
      if (max_violation(cons, x) > kFeasibleTol) continue;
      AscentOutcome run = ascend(cons, s, d, k, std::move(x), budget.iterations);
      if (run.maxViolation > 1e-8) continue;
      if (!rep.feasible || run.objective > bestF) {
        bestF = run.objective;
        rep.feasible = true;
        rep.kktResidual = run.kktResidual;
        rep.maxViolation = run.maxViolation;
      }
    }
    if (rep.feasible) rep.optimum = bestF - lamPrefix[static_cast<std::size_t>(k - 1)];
    out.perK.push_back(rep);
  }

  bool any = false;
  double lo = 0.0, hi = 0.0;
  for (const SubproblemReport& rep : out.perK) {
    if (!rep.feasible) continue;
    if (!any) {
      lo = hi = rep.optimum;
      any = true;
    } else {
      lo = std::min(lo, rep.optimum);
      hi = std::max(hi, rep.optimum);
    }
    out.diagnostics.kktResidual = std::max(out.diagnostics.kktResidual, rep.kktResidual);
    out.diagnostics.maxViolation = std::max(out.diagnostics.maxViolation, rep.maxViolation);
  }
  if (!any)
    throw std::runtime_error(
        "pure_to_isotropic_nogo: no feasible subproblem; the fiber regions "
        "could not be entered at the requested budget");

  out.value = lo;
  out.diagnostics.subproblemSpread = hi - lo;
  out.diagnostics.restartsUsed = budget.restarts;
  out.diagnostics.onBoundary = std::abs(out.value) <= kNoGoBand;
  out.verdict = out.value < -kNoGoBand ? Verdict::NoGo : Verdict::Inconclusive;
  return out;
}

}  // namespace symroof::witness
