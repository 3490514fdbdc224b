// radial: projection-free first-order methods for nonnegative maximization.
// Licensed under the Apache License, Version 2.0.
#pragma once

#include <Eigen/Core>
#include <cmath>
#include <functional>
#include <optional>
#include <utility>
#include <vector>

#include "radial/errors.hpp"
#include "radial/ext_real.hpp"

namespace radial {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

// A point of the upper half space paired with a positive last coordinate.
struct RadialPoint {
  Vector x;
  double u = 1.0;
};

// The radial point transform (x, u) -> (x, 1) / u. Applying it twice gives
// the identity, which is what makes primal recovery from dual iterates a
// plain division.
inline RadialPoint gamma_point(const RadialPoint& p) {
  if (!(p.u > 0.0) || !std::isfinite(p.u)) {
    throw ConfigError("gamma_point requires a finite positive last coordinate");
  }
  return RadialPoint{p.x / p.u, 1.0 / p.u};
}

inline RadialPoint gamma_point(const Vector& x, double u) {
  return gamma_point(RadialPoint{x, u});
}

// A nonnegative objective to maximize. eval is total: points outside the
// domain report the zero tag, never a negative number or nan. supgradient and
// hessian may be absent for black-box objectives; when present they are only
// queried at points where eval is finite.
struct PrimalObjective {
  Eigen::Index dim = 0;
  std::function<ExtReal(const Vector&)> eval;
  std::function<Vector(const Vector&)> supgradient;  // may be empty
  std::function<Matrix(const Vector&)> hessian;      // may be empty
  bool is_concave = false;
  bool is_differentiable = false;
};

// Perspective value v * f(y / v) for v > 0, the quantity whose monotonicity
// in v defines upper radiality.
inline ExtReal perspective(const PrimalObjective& f, const Vector& y, double v) {
  if (!(v > 0.0) || !std::isfinite(v)) {
    throw ConfigError("perspective requires a finite positive scale v");
  }
  return v * f.eval(y / v);
}

// The dual of a primal objective: eval(y) is the largest v with
// v * f(y / v) <= 1, located by bracketed bisection.
struct DualObjective {
  PrimalObjective source;
  double eval_tolerance = 1e-10;  // relative width of the final bracket
  double bracket_cap = 1e12;      // scales beyond this count as unbounded
  double mono_tolerance = 1e-9;   // slack before flagging non-monotone probes
};

namespace detail {

// Raises if a pair of probes contradicts monotonicity of v -> f^p(y, v).
inline void require_monotone_probes(const Vector& y, double v_small,
                                    const ExtReal& val_small, double v_large,
                                    const ExtReal& val_large, double slack) {
  double scale = 1.0;
  if (val_small.is_finite()) scale = std::max(scale, val_small.value());
  if (exceeds_with_slack(val_small, val_large, slack * scale)) {
    throw RadialityViolation(y, v_small, v_large, val_small.as_double(),
                             val_large.as_double());
  }
}

}  // namespace detail

// Evaluates the dual at y. `warm` seeds the bracketing scan, which solver
// loops set to the previous iterate's value so the scan usually terminates in
// one or two probes. Returns the zero tag when no positive scale satisfies
// the perspective inequality (an unboundedness certificate for the primal)
// and the infinite tag when every scale up to bracket_cap satisfies it.
inline ExtReal dual_eval(const DualObjective& d, const Vector& y,
                         double warm = 1.0) {
  const PrimalObjective& f = d.source;
  const double cap = d.bracket_cap;
  const double floor = 1.0 / d.bracket_cap;
  if (!(warm > 0.0) || !std::isfinite(warm) || warm > cap || warm < floor) {
    warm = 1.0;
  }

  const ExtReal one = ExtReal::finite(1.0);
  auto probe = [&](double v) { return perspective(f, y, v); };
  auto inside = [&](const ExtReal& val) { return val <= one; };

  double v = warm;
  ExtReal val = probe(v);
  double lo, hi;
  ExtReal val_lo, val_hi;
  if (inside(val)) {
    // Expand upward until the perspective leaves the unit interval.
    lo = v;
    val_lo = val;
    for (;;) {
      if (lo >= cap) return ExtReal::infinity();
      hi = std::min(2.0 * lo, cap);
      val_hi = probe(hi);
      detail::require_monotone_probes(y, lo, val_lo, hi, val_hi,
                                      d.mono_tolerance);
      if (!inside(val_hi)) break;
      lo = hi;
      val_lo = val_hi;
    }
  } else {
    // Contract downward until it enters, or give up at the floor.
    hi = v;
    val_hi = val;
    for (;;) {
      if (hi <= floor) return ExtReal::zero();
      lo = std::max(0.5 * hi, floor);
      val_lo = probe(lo);
      detail::require_monotone_probes(y, lo, val_lo, hi, val_hi,
                                      d.mono_tolerance);
      if (inside(val_lo)) break;
      hi = lo;
      val_hi = val_lo;
    }
  }

  // Bisect the bracket [lo, hi] with f^p(y, lo) <= 1 < f^p(y, hi). A plateau
  // of perspective values equal to 1 stays on the lo side, so the returned
  // scale is the supremum end of the plateau.
  while (hi - lo > d.eval_tolerance * lo) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;  // bracket hit double resolution
    const ExtReal val_mid = probe(mid);
    detail::require_monotone_probes(y, lo, val_lo, mid, val_mid,
                                    d.mono_tolerance);
    detail::require_monotone_probes(y, mid, val_mid, hi, val_hi,
                                    d.mono_tolerance);
    if (inside(val_mid)) {
      lo = mid;
      val_lo = val_mid;
    } else {
      hi = mid;
      val_hi = val_mid;
    }
  }
  return ExtReal::finite(0.5 * (lo + hi));
}

// Maps a dual point and its dual value back to a feasible primal point. The
// scale must be the finite positive dual value at y.
inline RadialPoint primal_recover(const Vector& y, double v) {
  if (!(v > 0.0) || !std::isfinite(v)) {
    throw ConfigError("primal_recover requires a finite positive dual value");
  }
  return RadialPoint{y / v, 1.0 / v};
}

inline RadialPoint primal_recover(const Vector& y, const ExtReal& v) {
  if (!v.is_finite()) {
    throw ConfigError(
        v.is_zero()
            ? "primal_recover: dual value is zero (primal unbounded above)"
            : "primal_recover: dual value is infinite");
  }
  return primal_recover(y, v.value());
}

// Dual subgradient from a primal supgradient g at the recovered point
// x = y / v: the transform maps g to g / (g . x - f(x)). The denominator is
// negative for strictly upper radial objectives; values within den_guard of
// zero raise SingularityError.
inline Vector dual_subgradient_at(const PrimalObjective& f, const Vector& y,
                                  double v, double den_guard = 1e-12) {
  if (!f.supgradient) {
    throw ConfigError("objective has no supgradient oracle");
  }
  if (!(v > 0.0) || !std::isfinite(v)) {
    throw ConfigError("dual_subgradient_at requires a finite positive value");
  }
  const Vector x = y / v;
  const ExtReal fx = f.eval(x);
  if (!fx.is_finite()) {
    throw SingularityError("recovered point left the objective's domain");
  }
  const Vector g = f.supgradient(x);
  const double den = g.dot(x) - fx.value();
  if (den > -den_guard) {
    throw SingularityError(
        "subgradient transform denominator is not negative; the objective is "
        "at best weakly radial here");
  }
  return g / den;
}

// Gradient of the dual at y for differentiable sources. Evaluates the dual,
// recovers x = y / v and applies the same transform as dual_subgradient_at.
inline Vector dual_gradient(const DualObjective& d, const Vector& y,
                            double warm = 1.0) {
  if (!d.source.is_differentiable) {
    throw ConfigError("dual_gradient requires a differentiable source");
  }
  const ExtReal v = dual_eval(d, y, warm);
  if (!v.is_finite()) {
    throw ConfigError("dual_gradient: dual value is not finite positive");
  }
  return dual_subgradient_at(d.source, y, v.value());
}

// Hessian of the dual at y: with x = y / v, g = grad f(x), H = hess f(x) and
// den = g . x - f(x), the dual Hessian is (f(x) / den) * J H J^T where
// J = I - g x^T / den.
inline Matrix dual_hessian(const DualObjective& d, const Vector& y,
                           double warm = 1.0) {
  if (!d.source.is_differentiable || !d.source.hessian) {
    throw ConfigError("dual_hessian requires gradient and Hessian oracles");
  }
  const ExtReal v = dual_eval(d, y, warm);
  if (!v.is_finite()) {
    throw ConfigError("dual_hessian: dual value is not finite positive");
  }
  const Vector x = y / v.value();
  const ExtReal fx = d.source.eval(x);
  if (!fx.is_finite()) {
    throw SingularityError("recovered point left the objective's domain");
  }
  const Vector g = d.source.supgradient(x);
  const double den = g.dot(x) - fx.value();
  if (den > -1e-12) {
    throw SingularityError("dual_hessian: transform denominator not negative");
  }
  const Matrix H = d.source.hessian(x);
  const Matrix J =
      Matrix::Identity(y.size(), y.size()) - g * x.transpose() / den;
  return (fx.value() / den) * J * H * J.transpose();
}

// Witness of a failed radiality property along one probe direction.
struct RadialityWitness {
  Vector direction;
  double v1 = 0.0, v2 = 0.0;
  ExtReal value1, value2;
};

struct RadialityReport {
  std::vector<RadialityWitness> monotonicity_violations;
  // Consecutive finite perspective values that failed to strictly increase.
  std::vector<RadialityWitness> strictness_failures;
  int directions_checked = 0;

  bool monotone() const { return monotonicity_violations.empty(); }
  bool pass() const {
    return monotonicity_violations.empty() && strictness_failures.empty();
  }
};

inline std::vector<double> log_v_grid(double lo = 1e-3, double hi = 1e3,
                                      int count = 61) {
  if (!(lo > 0.0) || !(hi > lo) || count < 2) {
    throw ConfigError("log_v_grid requires 0 < lo < hi and count >= 2");
  }
  std::vector<double> grid(static_cast<std::size_t>(count));
  const double step = std::log(hi / lo) / (count - 1);
  for (int i = 0; i < count; ++i) grid[static_cast<std::size_t>(i)] =
      lo * std::exp(step * i);
  grid.back() = hi;
  return grid;
}

// Sampled certificate that f is (strictly) upper radial: walks every probe
// direction across the scale grid and records perspective values that
// decrease (violations) or fail to strictly increase while finite
// (strictness failures). Scaling a direction only reindexes the grid, so
// unit directions with a wide grid cover rays of every length.
inline RadialityReport check_upper_radial(const PrimalObjective& f,
                                          const std::vector<Vector>& directions,
                                          const std::vector<double>& v_grid,
                                          double eps_mono = 1e-9) {
  if (v_grid.size() < 2) {
    throw ConfigError("check_upper_radial needs at least two grid scales");
  }
  RadialityReport report;
  for (const Vector& dir : directions) {
    ExtReal prev = perspective(f, dir, v_grid.front());
    for (std::size_t i = 1; i < v_grid.size(); ++i) {
      const ExtReal cur = perspective(f, dir, v_grid[i]);
      const double scale =
          prev.is_finite() ? std::max(1.0, prev.value()) : 1.0;
      if (exceeds_with_slack(prev, cur, eps_mono * scale)) {
        report.monotonicity_violations.push_back(
            {dir, v_grid[i - 1], v_grid[i], prev, cur});
      } else if (prev.is_finite() && cur.is_finite() &&
                 cur.value() <= prev.value()) {
        report.strictness_failures.push_back(
            {dir, v_grid[i - 1], v_grid[i], prev, cur});
      }
      prev = cur;
    }
    ++report.directions_checked;
  }
  return report;
}

// View of the dual as a nonnegative objective, so it can be fed back through
// dual_eval (the double transform reproduces the source on upper radial
// objectives) or probed by the conditioning helpers.
inline PrimalObjective as_primal(const DualObjective& d) {
  PrimalObjective g;
  g.dim = d.source.dim;
  g.eval = [d](const Vector& y) { return dual_eval(d, y); };
  return g;
}

}  // namespace radial
