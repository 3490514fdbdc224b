// radial: projection-free first-order methods for nonnegative maximization.
// Licensed under the Apache License, Version 2.0.
#pragma once

#include <Eigen/Core>
#include <Eigen/Eigenvalues>
#include <cmath>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "radial/problems.hpp"
#include "radial/rng.hpp"

namespace radial {

enum class Provenance { exact, sampled_upper, sampled_lower };

inline const char* to_string(Provenance p) {
  switch (p) {
    case Provenance::exact: return "exact";
    case Provenance::sampled_upper: return "sampled-upper";
    default: return "sampled-lower";
  }
}

struct Estimate {
  double value = std::numeric_limits<double>::quiet_NaN();
  Provenance provenance = Provenance::exact;
};

// Radius at which the objective first hits zero along each probe direction:
// the boundary shared by the zero set and the domain when the objective is
// concave with f(0) > 0. +inf marks directions that never cross below the
// cap.
inline std::vector<double> directional_zero_crossings(
    const PrimalObjective& f, const std::vector<Vector>& directions,
    double tol = 1e-9, double cap = 1e12) {
  if (!f.eval(Vector::Zero(f.dim)).is_finite()) {
    throw ConfigError("zero crossings need f(0) finite and positive");
  }
  std::vector<double> crossings;
  crossings.reserve(directions.size());
  const double floor = 1.0 / cap;
  for (const Vector& d : directions) {
    auto positive = [&](double r) { return f.eval(r * d).is_finite(); };
    double lo, hi;  // positive at lo, zero at hi
    if (positive(1.0)) {
      lo = 1.0;
      for (;;) {
        if (lo >= cap) {
          hi = std::numeric_limits<double>::infinity();
          break;
        }
        hi = std::min(2.0 * lo, cap);
        if (!positive(hi)) break;
        lo = hi;
      }
      if (std::isinf(hi)) {
        crossings.push_back(hi);
        continue;
      }
    } else {
      hi = 1.0;
      for (;;) {
        if (hi <= floor) break;
        lo = std::max(0.5 * hi, floor);
        if (positive(lo)) break;
        hi = lo;
      }
      if (hi <= floor) {
        crossings.push_back(floor);
        continue;
      }
    }
    while (hi - lo > tol * hi) {
      const double mid = 0.5 * (lo + hi);
      if (mid <= lo || mid >= hi) break;
      if (positive(mid)) {
        lo = mid;
      } else {
        hi = mid;
      }
    }
    crossings.push_back(0.5 * (lo + hi));
  }
  return crossings;
}

// R(f): distance from the origin to the zero set. The sampled minimum can
// only overshoot the true infimum, hence the provenance tag; stepsize
// consumers should shrink it (0.9 is the convention used by the solvers
// here).
inline Estimate radius_R(const PrimalObjective& f,
                         const std::vector<Vector>& directions,
                         double tol = 1e-9, double cap = 1e12) {
  const std::vector<double> crossings =
      directional_zero_crossings(f, directions, tol, cap);
  double r = std::numeric_limits<double>::infinity();
  for (double c : crossings) r = std::min(r, c);
  return Estimate{r, Provenance::sampled_upper};
}

// D(f): the largest norm inside the domain. Sampling undershoots, hence
// sampled-lower.
inline Estimate diameter_D(const PrimalObjective& f,
                           const std::vector<Vector>& directions,
                           double tol = 1e-9, double cap = 1e12) {
  const std::vector<double> crossings =
      directional_zero_crossings(f, directions, tol, cap);
  double dmax = 0.0;
  for (double c : crossings) dmax = std::max(dmax, c);
  return Estimate{dmax, Provenance::sampled_lower};
}

// Smoothness carried from the primal to the dual: an L-smooth concave
// objective on its positive region has a (1 + D/R)^3 L smooth dual.
inline double smoothness_bound(double L, double D, double R) {
  if (!(L >= 0.0) || !(R > 0.0) || !(D >= 0.0)) {
    throw ConfigError("smoothness_bound requires L >= 0, D >= 0, R > 0");
  }
  const double ratio = 1.0 + D / R;
  return ratio * ratio * ratio * L;
}

// Sharpness carried to the dual: primal sharpness constant C at a maximizer
// x_star with value f_star becomes C / (C |x_star| + f_star) for the dual.
inline double sharpness_dual_constant(double C, const Vector& x_star,
                                      double f_star) {
  if (!(C > 0.0) || !(f_star > 0.0)) {
    throw ConfigError("sharpness_dual_constant requires C > 0 and f_star > 0");
  }
  return C / (C * x_star.norm() + f_star);
}

// Largest spectral norm of the objective's Hessian over the sample points
// that lie in the domain. A sampled stand-in for the level-set smoothness
// constant.
inline double sampled_hessian_bound(const PrimalObjective& f,
                                    const std::vector<Vector>& points) {
  if (!f.hessian) throw ConfigError("sampled_hessian_bound needs a Hessian");
  double bound = 0.0;
  for (const Vector& x : points) {
    if (!f.eval(x).is_finite()) continue;
    Eigen::SelfAdjointEigenSolver<Matrix> es(f.hessian(x));
    bound = std::max(bound, es.eigenvalues().cwiseAbs().maxCoeff());
  }
  return bound;
}

struct GrowthProbeResult {
  double theta_primal = std::numeric_limits<double>::quiet_NaN();
  double theta_dual = std::numeric_limits<double>::quiet_NaN();
  int primal_points = 0;
  int dual_points = 0;
};

namespace detail {

inline double regression_slope(const std::vector<double>& u,
                               const std::vector<double>& w) {
  const std::size_t n = u.size();
  double um = 0.0, wm = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    um += u[i];
    wm += w[i];
  }
  um /= static_cast<double>(n);
  wm /= static_cast<double>(n);
  double num = 0.0, den = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    num += (u[i] - um) * (w[i] - wm);
    den += (u[i] - um) * (u[i] - um);
  }
  if (den == 0.0) return 0.0;
  return num / den;
}

}  // namespace detail

// Estimates the growth exponent theta on both sides of the transform by
// regressing log (sup/sub)gradient norms against log optimality gaps along
// rays around the maximizer. Gaps below gap_floor are excluded so the log
// scale stays meaningful. The exponent is preserved by the transform, which
// the pair of slopes lets callers verify.
inline GrowthProbeResult growth_exponent_probe(
    const RadialProblem& prob, const Vector& x_star,
    const std::vector<double>& radii, int n_dirs = 16, std::uint64_t seed = 7,
    double gap_floor = 1e-12) {
  if (!prob.primal.supgradient) {
    throw ConfigError("growth probe needs a primal supgradient");
  }
  if (radii.empty()) throw ConfigError("growth probe needs radii");
  const ExtReal fstar = prob.primal.eval(x_star);
  if (!fstar.is_finite()) {
    throw ConfigError("growth probe: f(x_star) must be finite positive");
  }
  const double p_star = fstar.value();
  const Vector y_star = x_star / p_star;
  const ExtReal dstar_val = prob.dual_value(y_star, 1.0 / p_star);
  if (!dstar_val.is_finite()) {
    throw ConfigError("growth probe: dual value at y_star must be finite");
  }
  const double d_star = dstar_val.value();

  const std::vector<Vector> dirs = direction_set(prob.dim(), n_dirs, seed);
  GrowthProbeResult out;
  std::vector<double> up, wp, ud, wd;
  for (const Vector& dir : dirs) {
    for (double rho : radii) {
      const Vector x = x_star + rho * dir;
      const ExtReal fx = prob.primal.eval(x);
      if (fx.is_finite()) {
        const double gap = p_star - fx.value();
        const double gn = prob.primal.supgradient(x).norm();
        if (gap > gap_floor && gn > 0.0) {
          up.push_back(std::log(gap));
          wp.push_back(std::log(gn));
        }
      }
      const Vector y = y_star + rho * dir;
      const RadialProblem::ActiveDual at = prob.dual_active(y, d_star);
      if (at.value.is_finite()) {
        const double gap = at.value.value() - d_star;
        if (gap > gap_floor) {
          const double gn = prob.dual_subgradient(y, at).norm();
          if (gn > 0.0) {
            ud.push_back(std::log(gap));
            wd.push_back(std::log(gn));
          }
        }
      }
    }
  }
  out.primal_points = static_cast<int>(up.size());
  out.dual_points = static_cast<int>(ud.size());
  if (up.size() >= 2) out.theta_primal = detail::regression_slope(up, wp);
  if (ud.size() >= 2) out.theta_dual = detail::regression_slope(ud, wd);
  return out;
}

// Summary the certify entry point prints: radius and diameter with their
// provenance, plus the derived dual constants.
struct ConditioningReport {
  Estimate R;
  Estimate D;
  std::optional<double> L;  // level-set smoothness, when the caller knows it

  double lipschitz_dual() const { return 1.0 / R.value; }
  std::optional<double> smooth_dual_bound() const {
    if (!L) return std::nullopt;
    return smoothness_bound(*L, D.value, R.value);
  }
};

inline ConditioningReport conditioning_report(
    const PrimalObjective& f, const std::vector<Vector>& directions,
    std::optional<double> L = std::nullopt, double tol = 1e-9,
    double cap = 1e12) {
  const std::vector<double> crossings =
      directional_zero_crossings(f, directions, tol, cap);
  ConditioningReport rep;
  double rmin = std::numeric_limits<double>::infinity();
  double dmax = 0.0;
  for (double c : crossings) {
    rmin = std::min(rmin, c);
    dmax = std::max(dmax, c);
  }
  rep.R = Estimate{rmin, Provenance::sampled_upper};
  rep.D = Estimate{dmax, Provenance::sampled_lower};
  rep.L = L;
  return rep;
}

// QP variant: the polyhedral part of the radius is available in closed form
// (the inradius), so the sampled sweep only has to cover the quadratic's
// zero set.
inline ConditioningReport conditioning_report_qp(
    const QpInstance& inst, const std::vector<Vector>& directions,
    std::optional<double> L = std::nullopt, double tol = 1e-9,
    double cap = 1e12) {
  ConditioningReport rep =
      conditioning_report(inst.objective(), directions, L, tol, cap);
  if (inst.A.rows() > 0) {
    const double inr = inst.gauge().inradius();
    // Still an upper bound overall: the quadratic's zero set is only sampled.
    rep.R.value = std::min(rep.R.value, inr);
  }
  return rep;
}

}  // namespace radial
