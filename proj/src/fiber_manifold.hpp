#pragma once
// Shared helpers for searches over the fiber {mu >= 0, sum mu = 1,
// sum sqrt(mu) = s} in the coordinates x_i = sqrt(mu_i): the feasible set is
// the slice of the unit sphere by the plane sum x = s, intersected with the
// nonnegative orthant. Internal to the library.

#include "symroof/qcore.hpp"

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <functional>
#include <vector>

namespace symroof::detail {

// Exact retraction onto {sum x = s, sum x^2 = 1} restricted to coordinates
// not pinned at zero: recenter to mean s/dFree, rescale the residual to the
// sphere radius sqrt(1 - s^2/dFree). Negative coordinates are pinned and the
// retraction repeats on the free set. Returns false when the slice is empty.
inline bool retract_sphere_plane(std::vector<double>& x, double s) {
  const int d = static_cast<int>(x.size());
  std::vector<bool> pinned(x.size(), false);
  for (int pass = 0; pass < d + 1; ++pass) {
    int dFree = 0;
    for (int i = 0; i < d; ++i)
      if (!pinned[i]) ++dFree;
    if (dFree == 0 || s * s > static_cast<double>(dFree) + 1e-12) return false;
    const double radius2 = std::max(0.0, 1.0 - s * s / dFree);
    double mean = 0.0;
    for (int i = 0; i < d; ++i)
      if (!pinned[i]) mean += x[i];
    mean /= dFree;
    double dev2 = 0.0;
    for (int i = 0; i < d; ++i)
      if (!pinned[i]) dev2 += (x[i] - mean) * (x[i] - mean);
    const double center = s / dFree;
    if (dev2 < 1e-300) {
      // Degenerate direction: spread deterministically along a zero-mean
      // alternating pattern inside the free set so the rescale below is well
      // defined. The pattern must be centered or the rescale amplifies its
      // mean and leaves the plane.
      if (radius2 > 0.0) {
        std::vector<double> pattern(static_cast<std::size_t>(dFree));
        double patternMean = 0.0;
        int sign = 1;
        for (int t = 0; t < dFree; ++t) {
          pattern[static_cast<std::size_t>(t)] = sign * (1.0 + t);
          patternMean += pattern[static_cast<std::size_t>(t)];
          sign = -sign;
        }
        patternMean /= dFree;
        int t = 0;
        for (int i = 0; i < d; ++i)
          if (!pinned[i])
            x[i] = center + 1e-8 * (pattern[static_cast<std::size_t>(t++)] - patternMean);
      }
      dev2 = 0.0;
      for (int i = 0; i < d; ++i)
        if (!pinned[i]) dev2 += (x[i] - center) * (x[i] - center);
      mean = center;
      if (dev2 < 1e-300) {
        for (int i = 0; i < d; ++i)
          if (!pinned[i]) x[i] = center;
        return radius2 <= 1e-12;
      }
    }
    const double scale = std::sqrt(radius2 / dev2);
    bool anyNegative = false;
    for (int i = 0; i < d; ++i)
      if (!pinned[i]) {
        x[i] = center + scale * (x[i] - mean);
        if (x[i] < 0.0) anyNegative = true;
      }
    if (!anyNegative) return true;
    for (int i = 0; i < d; ++i)
      if (!pinned[i] && x[i] < 0.0) {
        x[i] = 0.0;
        pinned[i] = true;
      }
  }
  return false;
}

// Removes the components along the constraint normals (1,...,1) and x from g,
// zeroing coordinates pinned at the boundary whose component points outward.
inline std::vector<double> tangent_project(const std::vector<double>& x,
                                           std::vector<double> g) {
  const int d = static_cast<int>(x.size());
  for (int pass = 0; pass < 2; ++pass) {
    double gs = 0.0, gx = 0.0, xs = 0.0, xx = 0.0;
    int dFree = 0;
    for (int i = 0; i < d; ++i) {
      if (pass > 0 && x[i] <= 0.0 && g[i] == 0.0) continue;
      gs += g[i];
      gx += g[i] * x[i];
      xs += x[i];
      xx += x[i] * x[i];
      ++dFree;
    }
    if (dFree == 0) break;
    // Solve for multipliers of the two normals restricted to the free set.
    const double a11 = dFree, a12 = xs, a22 = xx;
    const double det = a11 * a22 - a12 * a12;
    double alpha = 0.0, beta = 0.0;
    if (std::abs(det) > 1e-300) {
      alpha = (a22 * gs - a12 * gx) / det;
      beta = (a11 * gx - a12 * gs) / det;
    }
    bool clampedNew = false;
    for (int i = 0; i < d; ++i) {
      if (pass > 0 && x[i] <= 0.0 && g[i] == 0.0) continue;
      g[i] -= alpha + beta * x[i];
      // Pinned coordinate moving further negative: freeze it and re-project.
      if (x[i] <= 0.0 && g[i] > 0.0) {  // descent direction is -g
        g[i] = 0.0;
        clampedNew = true;
      }
    }
    if (!clampedNew) break;
  }
  return g;
}

inline double norm2(const std::vector<double>& v) {
  double n = 0.0;
  for (double t : v) n += t * t;
  return std::sqrt(n);
}

// Golden-section refinement of fn on [lo, hi] around a coarse scan minimum.
// Returns the best argument found; fn is called ~(scanPoints + 2*refine).
inline double golden_min(const std::function<double(double)>& fn, double lo,
                         double hi, int scanPoints = 9, int refine = 24) {
  double bestArg = lo, bestVal = fn(lo);
  for (int i = 1; i < scanPoints; ++i) {
    const double t = lo + (hi - lo) * i / (scanPoints - 1);
    const double v = fn(t);
    if (v < bestVal) {
      bestVal = v;
      bestArg = t;
    }
  }
  const double span = (hi - lo) / (scanPoints - 1);
  double a = std::max(lo, bestArg - span), b = std::min(hi, bestArg + span);
  const double phi = 0.5 * (std::sqrt(5.0) - 1.0);
  double c = b - phi * (b - a), dPt = a + phi * (b - a);
  double fc = fn(c), fd = fn(dPt);
  for (int i = 0; i < refine; ++i) {
    if (fc < fd) {
      b = dPt;
      dPt = c;
      fd = fc;
      c = b - phi * (b - a);
      fc = fn(c);
    } else {
      a = c;
      c = dPt;
      fc = fd;
      dPt = a + phi * (b - a);
      fd = fn(dPt);
    }
  }
  const double mid = 0.5 * (a + b), fm = fn(mid);
  return fm < bestVal ? mid : bestArg;
}

// Random point on the sphere-plane slice (uniform gaussian then retract).
inline std::vector<double> random_fiber_point(qcore::Rng& rng, int d, double s) {
  for (int attempt = 0; attempt < 64; ++attempt) {
    std::vector<double> x(d);
    for (double& t : x) t = std::abs(rng.gaussian());
    if (retract_sphere_plane(x, s)) return x;
  }
  // Fall back to the uniform point, feasible for every s <= sqrt(d).
  std::vector<double> x(d, s / d);
  retract_sphere_plane(x, s);
  return x;
}

inline std::vector<double> squares_sorted_desc(const std::vector<double>& x) {
  std::vector<double> mu(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) mu[i] = x[i] * x[i];
  std::sort(mu.begin(), mu.end(), std::greater<double>());
  return mu;
}

}  // namespace symroof::detail
