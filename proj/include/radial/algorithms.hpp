// radial: projection-free first-order methods for nonnegative maximization.
// Licensed under the Apache License, Version 2.0.
#pragma once

#include <Eigen/Core>
#include <chrono>
#include <cmath>
#include <functional>
#include <limits>
#include <optional>
#include <utility>
#include <vector>

#include "radial/conditioning.hpp"
#include "radial/problems.hpp"

namespace radial {

// Stepsize rules for the dual subgradient method. polyak_gap needs the
// optimal dual value; relative_eps scales the target accuracy by the current
// dual value; nonconvex_eps is the unscaled variant used with indefinite
// objectives.
struct StepPolicy {
  enum class Kind { polyak_gap, relative_eps, nonconvex_eps, constant };

  Kind kind = Kind::constant;
  std::optional<double> d_star;
  double eps = 0.0;
  double alpha = 0.0;

  static StepPolicy polyak(double d_star) {
    StepPolicy p;
    p.kind = Kind::polyak_gap;
    p.d_star = d_star;
    return p;
  }
  static StepPolicy polyak_unset() {  // completed by the caller or rejected
    StepPolicy p;
    p.kind = Kind::polyak_gap;
    return p;
  }
  static StepPolicy relative(double eps) {
    if (!(eps > 0.0)) throw ConfigError("relative_eps requires eps > 0");
    StepPolicy p;
    p.kind = Kind::relative_eps;
    p.eps = eps;
    return p;
  }
  static StepPolicy nonconvex(double eps) {
    if (!(eps > 0.0)) throw ConfigError("nonconvex_eps requires eps > 0");
    StepPolicy p;
    p.kind = Kind::nonconvex_eps;
    p.eps = eps;
    return p;
  }
  static StepPolicy constant_step(double alpha) {
    if (!(alpha > 0.0)) throw ConfigError("constant step requires alpha > 0");
    StepPolicy p;
    p.kind = Kind::constant;
    p.alpha = alpha;
    return p;
  }

  double step(double dual_value, double subgrad_sq) const {
    switch (kind) {
      case Kind::polyak_gap:
        if (!d_star) {
          throw ConfigError("polyak_gap policy needs the optimal dual value");
        }
        return (dual_value - *d_star) / subgrad_sq;
      case Kind::relative_eps:
        return eps * dual_value / subgrad_sq;
      case Kind::nonconvex_eps:
        return eps / subgrad_sq;
      default:
        return alpha;
    }
  }
};

enum class SolveStatus {
  iters_exhausted,
  tol_reached,
  unbounded_certificate,
  stationary,
  projection_failure,
};

inline const char* to_string(SolveStatus s) {
  switch (s) {
    case SolveStatus::iters_exhausted: return "iters_exhausted";
    case SolveStatus::tol_reached: return "tol_reached";
    case SolveStatus::unbounded_certificate: return "unbounded_certificate";
    case SolveStatus::stationary: return "stationary";
    default: return "projection_failure";
  }
}

struct TraceRecord {
  int k = 0;
  double dual_value = 0.0;
  double primal_value = 0.0;
  double rel_gap = -1.0;  // -1 when no reference optimum is available
  double subgrad_norm = 0.0;
  double step = 0.0;
  double elapsed_seconds = 0.0;
};

struct SolveTrace {
  std::vector<TraceRecord> records;
  SolveStatus status = SolveStatus::iters_exhausted;
  int iterations = 0;
  Vector x;                       // final recovered primal point
  double primal_value = 0.0;      // objective at x
  double best_primal = 0.0;       // best objective seen
  double best_rel_gap = std::numeric_limits<double>::infinity();
  double best_subgrad_norm = std::numeric_limits<double>::infinity();
  long projection_sweeps = 0;     // inner Dykstra cost, baselines only
  std::optional<Vector> certificate;  // dual ray witnessing unboundedness
};

// Per-iteration view offered to observers (tests use this to inspect the
// dual iterates without bloating the trace).
struct IterationInfo {
  int k = 0;
  const Vector& y;
  const Vector& x;
  double dual_value = 0.0;
  double primal_value = 0.0;
  const Vector& direction;
  double step = 0.0;
};
using Observer = std::function<void(const IterationInfo&)>;

struct SolveOptions {
  int max_iters = 1000;
  double stop_tol = 0.0;  // 0 disables the tolerance stops
  // Enables the stationarity stop |subgrad| <= stop_tol * lipschitz_dual for
  // nonconvex runs.
  std::optional<double> lipschitz_dual;
  int record_every = 1;
  Observer observer;
};

namespace detail {

// Relative accuracy (p* - f) / f, the gap measure the dual controls; -1
// when no reference optimum is available.
inline double rel_gap_or_sentinel(const std::optional<double>& p_star,
                                  double value) {
  if (!p_star) return -1.0;
  return (*p_star - value) / std::max(value, 1e-300);
}

class Stopwatch {
 public:
  Stopwatch() : start_(std::chrono::steady_clock::now()) {}
  double seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() -
                                         start_).count();
  }

 private:
  std::chrono::steady_clock::time_point start_;
};

// Shared bookkeeping for every solver loop.
struct TraceBuilder {
  SolveTrace trace;
  std::optional<double> p_star;
  int record_every = 1;
  Stopwatch clock;

  explicit TraceBuilder(const std::optional<double>& p, int every)
      : p_star(p), record_every(every <= 0 ? 1 : every) {}

  double note(int k, double dual_value, double primal_value,
              double subgrad_norm, double step) {
    const double gap = rel_gap_or_sentinel(p_star, primal_value);
    trace.best_primal = std::max(trace.best_primal, primal_value);
    if (p_star) trace.best_rel_gap = std::min(trace.best_rel_gap, gap);
    trace.best_subgrad_norm = std::min(trace.best_subgrad_norm, subgrad_norm);
    if (k % record_every == 0) {
      trace.records.push_back({k, dual_value, primal_value, gap, subgrad_norm,
                               step, clock.seconds()});
    }
    return gap;
  }
};

inline Vector dual_start(const PrimalObjective& f, const Vector& x0,
                         double& warm) {
  const ExtReal f0 = f.eval(x0);
  if (!f0.is_finite()) {
    throw ConfigError("the start point must have a positive objective value");
  }
  warm = 1.0 / f0.value();
  return x0 / f0.value();
}

// Relative inflation applied to the dual value before recovering a primal
// iterate. When a constraint row is the active dual piece, y / v sits exactly
// on that face and roundoff decides its feasibility; dividing by a slightly
// larger value pulls the point strictly inside at a 1e-9 relative cost.
inline constexpr double kRecoveryInflation = 1e-9;

inline RadialPoint recover_inside(const Vector& y, double v) {
  return primal_recover(y, v * (1.0 + kRecoveryInflation));
}

inline double momentum_coefficient(int k, bool clip) {
  const double c = (static_cast<double>(k) - 1.0) / (static_cast<double>(k) + 2.0);
  return clip ? std::max(0.0, c) : c;
}

}  // namespace detail

// Dual subgradient descent: walk the convex dual with the chosen step rule
// and read a feasible primal iterate off every dual point. A zero dual value
// certifies the primal is unbounded above and stops the run with the
// witnessing ray.
inline SolveTrace radial_subgradient(const RadialProblem& prob,
                                     const Vector& x0, const StepPolicy& policy,
                                     const SolveOptions& opts = {}) {
  double warm = 1.0;
  Vector y = detail::dual_start(prob.primal, x0, warm);
  detail::TraceBuilder tb(prob.p_star, opts.record_every);
  SolveTrace& trace = tb.trace;
  trace.x = x0;
  trace.primal_value = prob.primal.eval(x0).as_double();

  for (int k = 0; k < opts.max_iters; ++k) {
    const RadialProblem::ActiveDual at = prob.dual_active(y, warm);
    if (at.value.is_zero()) {
      trace.status = SolveStatus::unbounded_certificate;
      trace.certificate = y;
      break;
    }
    if (at.value.is_infinite()) {
      throw SingularityError("dual value is infinite at an iterate");
    }
    const double v = at.value.value();
    warm = v;
    const RadialPoint rp = detail::recover_inside(y, v);
    const double fx = prob.primal.eval(rp.x).as_double();
    const Vector zeta = prob.dual_subgradient(y, at);
    const double norm_sq = zeta.squaredNorm();
    const double norm = std::sqrt(norm_sq);

    double step = 0.0;
    bool stop = false;
    SolveStatus stop_status = SolveStatus::iters_exhausted;
    if (norm_sq == 0.0) {
      stop = true;
      stop_status = SolveStatus::stationary;
    } else {
      step = policy.step(v, norm_sq);
      if (policy.kind == StepPolicy::Kind::polyak_gap && step <= 0.0) {
        // At or below the optimal dual value: nothing left to gain.
        step = 0.0;
        stop = true;
        stop_status = SolveStatus::tol_reached;
      }
    }

    const double gap = tb.note(k, v, fx, norm, step);
    if (opts.observer) {
      opts.observer(IterationInfo{k, y, rp.x, v, fx, zeta, step});
    }
    trace.iterations = k + 1;
    trace.x = rp.x;
    trace.primal_value = fx;

    if (!stop && opts.stop_tol > 0.0) {
      if (prob.p_star && gap <= opts.stop_tol) {
        stop = true;
        stop_status = SolveStatus::tol_reached;
      } else if (opts.lipschitz_dual &&
                 norm <= opts.stop_tol * *opts.lipschitz_dual) {
        stop = true;
        stop_status = SolveStatus::stationary;
      }
    }
    if (stop) {
      trace.status = stop_status;
      break;
    }
    y -= step * zeta;
  }
  return trace;
}

// ---------------------------------------------------------------------------
// Smoothing.

// Softmax envelope of the dual pieces: eta * log of summed exponentials of
// the nonlinear piece duals and the constraint rows. Sits within
// eta * log(m1 + m2) above the true dual everywhere.
struct SmoothedDual {
  std::vector<RadialPiece> pieces;
  PolyhedralGauge gauge;
  double eta = 1e-3;
  double L_eta = 0.0;
};

struct SoftmaxEval {
  double value = 0.0;
  Vector gradient;
};

inline SoftmaxEval softmax_eval_grad(const SmoothedDual& s, const Vector& y) {
  const std::size_t m1 = s.pieces.size();
  const Eigen::Index m2 = s.gauge.rows();
  std::vector<double> terms(m1 + static_cast<std::size_t>(m2));
  for (std::size_t j = 0; j < m1; ++j) {
    terms[j] = s.pieces[j].dual_value(y, 1.0).as_double();
  }
  for (Eigen::Index i = 0; i < m2; ++i) {
    terms[m1 + static_cast<std::size_t>(i)] = s.gauge.A.row(i).dot(y) / s.gauge.b[i];
  }
  double peak = -std::numeric_limits<double>::infinity();
  for (double t : terms) peak = std::max(peak, t);

  double total = 0.0;
  for (double& t : terms) {
    t = std::exp((t - peak) / s.eta);  // now a softmax weight, unnormalized
    total += t;
  }
  SoftmaxEval out;
  out.value = peak + s.eta * std::log(total);
  out.gradient = Vector::Zero(y.size());
  // Pieces with vanishing weight are skipped: their gradients may not even
  // be defined (a quadratic branch whose discriminant went negative).
  const double weight_floor = 1e-18 * total;
  for (std::size_t j = 0; j < m1; ++j) {
    if (terms[j] > weight_floor) {
      const double vj = s.pieces[j].dual_value(y, 1.0).as_double();
      out.gradient += (terms[j] / total) * s.pieces[j].dual_subgradient(y, vj);
    }
  }
  for (Eigen::Index i = 0; i < m2; ++i) {
    const double w = terms[m1 + static_cast<std::size_t>(i)];
    if (w > weight_floor) {
      out.gradient += (w / total) * s.gauge.row_direction(i);
    }
  }
  return out;
}

// Default smoothed gradient constant: the dual smoothness bound plus the
// softmax curvature term. The squared flag selects how the constraint row
// norms enter the curvature numerator (both readings are in circulation;
// squared is the default here).
inline double default_L_eta(double L, double D, double R,
                            const PolyhedralGauge& gauge, double eta,
                            bool squared_row_norms = true) {
  if (!(eta > 0.0)) throw ConfigError("default_L_eta requires eta > 0");
  const double lip = 1.0 / R;
  const double rows = gauge.max_row_norm();
  const double curvature = squared_row_norms
                               ? std::max(lip * lip, rows * rows)
                               : std::max(lip * lip, rows);
  return smoothness_bound(L, D, R) + curvature / eta;
}

struct SmoothingOptions {
  double eta = 1e-3;
  std::optional<double> L_eta;
  // Conditioning numbers for the default L_eta when it is not supplied.
  std::optional<double> L, D, R;
  bool squared_row_norms = true;
  bool momentum_clip = false;
  int max_iters = 1000;
  double stop_tol = 0.0;
  int record_every = 1;
  Observer observer;
};

// Accelerated descent on the softmax envelope of the dual. The momentum
// coefficient is (k - 1) / (k + 2) including the negative value at k = 0;
// momentum_clip floors it at zero.
inline SolveTrace radial_smoothing(const RadialProblem& prob, const Vector& x0,
                                   const SmoothingOptions& opts) {
  SmoothedDual sd;
  for (const RadialPiece& p : prob.pieces) {
    if (!p.dual_smooth || !p.dual_subgradient) {
      throw ConfigError("radial_smoothing needs smooth dual pieces");
    }
    sd.pieces.push_back(p);
  }
  sd.gauge = prob.gauge;
  sd.eta = opts.eta;
  if (!(opts.eta > 0.0)) throw ConfigError("radial_smoothing: eta must be positive");
  if (opts.L_eta) {
    sd.L_eta = *opts.L_eta;
  } else if (opts.L && opts.D && opts.R) {
    sd.L_eta = default_L_eta(*opts.L, *opts.D, *opts.R, sd.gauge, sd.eta,
                             opts.squared_row_norms);
  } else {
    throw ConfigError("radial_smoothing: supply L_eta or all of L, D, R");
  }
  if (!(sd.L_eta > 0.0)) throw ConfigError("radial_smoothing: L_eta must be positive");

  double warm = 1.0;
  Vector y = detail::dual_start(prob.primal, x0, warm);
  Vector y_grad_prev = y;  // the previous gradient-step point
  detail::TraceBuilder tb(prob.p_star, opts.record_every);
  SolveTrace& trace = tb.trace;
  trace.x = x0;
  trace.primal_value = prob.primal.eval(x0).as_double();

  for (int k = 0; k < opts.max_iters; ++k) {
    const ExtReal vt = prob.dual_value(y, warm);
    if (vt.is_zero()) {
      trace.status = SolveStatus::unbounded_certificate;
      trace.certificate = y;
      break;
    }
    const double v = vt.value();
    warm = v;
    const RadialPoint rp = detail::recover_inside(y, v);
    const double fx = prob.primal.eval(rp.x).as_double();

    const SoftmaxEval sm = softmax_eval_grad(sd, y);
    const double gap = tb.note(k, v, fx, sm.gradient.norm(), 1.0 / sd.L_eta);
    if (opts.observer) {
      opts.observer(IterationInfo{k, y, rp.x, v, fx, sm.gradient, 1.0 / sd.L_eta});
    }
    trace.iterations = k + 1;
    trace.x = rp.x;
    trace.primal_value = fx;
    if (opts.stop_tol > 0.0 && prob.p_star && gap <= opts.stop_tol) {
      trace.status = SolveStatus::tol_reached;
      break;
    }

    const Vector y_grad = y - sm.gradient / sd.L_eta;
    const double coef = detail::momentum_coefficient(k, opts.momentum_clip);
    y = y_grad + coef * (y_grad - y_grad_prev);
    y_grad_prev = y_grad;
  }
  return trace;
}

struct AcceleratedOptions {
  double L = 1.0;  // level-set smoothness of the primal
  double D = 1.0;  // domain diameter
  double R = 1.0;  // radius of the zero set
  // Direct override of the dual stepsize constant; the default is the
  // carried bound (1 + D/R)^3 L.
  std::optional<double> step_smoothness;
  bool momentum_clip = false;
  int max_iters = 1000;
  double stop_tol = 0.0;
  int record_every = 1;
  Observer observer;
};

// Accelerated gradient descent directly on a smooth dual (single nonlinear
// piece, no constraint rows).
inline SolveTrace radial_accelerated(const RadialProblem& prob,
                                     const Vector& x0,
                                     const AcceleratedOptions& opts) {
  if (prob.pieces.size() != 1 || prob.gauge.rows() > 0) {
    throw ConfigError("radial_accelerated expects one smooth dual piece");
  }
  const RadialPiece& piece = prob.pieces.front();
  if (!piece.dual_smooth || !piece.dual_subgradient) {
    throw ConfigError("radial_accelerated needs a smooth dual piece");
  }
  const double L_dual = opts.step_smoothness
                            ? *opts.step_smoothness
                            : smoothness_bound(opts.L, opts.D, opts.R);
  if (!(L_dual > 0.0)) throw ConfigError("radial_accelerated: bad smoothness");

  double warm = 1.0;
  Vector y = detail::dual_start(prob.primal, x0, warm);
  Vector y_grad_prev = y;
  detail::TraceBuilder tb(prob.p_star, opts.record_every);
  SolveTrace& trace = tb.trace;
  trace.x = x0;
  trace.primal_value = prob.primal.eval(x0).as_double();

  for (int k = 0; k < opts.max_iters; ++k) {
    const ExtReal vt = piece.dual_value(y, warm);
    if (vt.is_zero()) {
      trace.status = SolveStatus::unbounded_certificate;
      trace.certificate = y;
      break;
    }
    const double v = vt.value();
    warm = v;
    const RadialPoint rp = detail::recover_inside(y, v);
    const double fx = prob.primal.eval(rp.x).as_double();
    const Vector grad = piece.dual_subgradient(y, v);

    const double gap = tb.note(k, v, fx, grad.norm(), 1.0 / L_dual);
    if (opts.observer) {
      opts.observer(IterationInfo{k, y, rp.x, v, fx, grad, 1.0 / L_dual});
    }
    trace.iterations = k + 1;
    trace.x = rp.x;
    trace.primal_value = fx;
    if (opts.stop_tol > 0.0 && prob.p_star && gap <= opts.stop_tol) {
      trace.status = SolveStatus::tol_reached;
      break;
    }

    const Vector y_grad = y - grad / L_dual;
    const double coef = detail::momentum_coefficient(k, opts.momentum_clip);
    y = y_grad + coef * (y_grad - y_grad_prev);
    y_grad_prev = y_grad;
  }
  return trace;
}

// ---------------------------------------------------------------------------
// Baselines: projection-based ascent and Frank-Wolfe.

struct ProjectionResult {
  Vector point;
  bool converged = false;
  int sweeps = 0;
};

// Dykstra's cyclic projection onto the intersection of halfspaces
// A x <= b. For convex pieces this converges to the exact metric projection,
// unlike plain cyclic projections.
inline ProjectionResult dykstra_project(const Vector& z,
                                        const PolyhedralGauge& poly,
                                        int max_sweeps = 1000,
                                        double tol = 1e-12) {
  const Eigen::Index m = poly.rows();
  Vector x = z;
  if (m == 0) return {x, true, 0};
  Matrix increments = Matrix::Zero(m, z.size());
  for (int sweep = 1; sweep <= max_sweeps; ++sweep) {
    double moved = 0.0;
    for (Eigen::Index i = 0; i < m; ++i) {
      const Vector w = x + increments.row(i).transpose();
      const double excess = poly.A.row(i).dot(w) - poly.b[i];
      Vector projected = w;
      if (excess > 0.0) {
        projected -= (excess / poly.A.row(i).squaredNorm()) *
                     poly.A.row(i).transpose();
      }
      increments.row(i) = (w - projected).transpose();
      moved += (x - projected).norm();
      x = projected;
    }
    if (moved <= tol * std::max(1.0, x.norm())) {
      return {x, true, sweep};
    }
  }
  return {x, false, max_sweeps};
}

struct BaselineOptions {
  int max_iters = 1000;
  double stop_tol = 0.0;
  std::optional<double> p_star;
  int record_every = 1;
  int projection_sweeps = 1000;
  double projection_tol = 1e-12;
  bool momentum_clip = false;  // accelerated variant only
  Observer observer;
};

namespace detail {

inline SolveTrace projected_ascent(const SmoothFunction& f,
                                   const PolyhedralGauge& poly,
                                   const Vector& x0, double L,
                                   const BaselineOptions& opts,
                                   bool accelerated) {
  if (!(L > 0.0)) throw ConfigError("projected ascent requires L > 0");
  if (!f.gradient) throw ConfigError("projected ascent needs a gradient");
  detail::TraceBuilder tb(opts.p_star, opts.record_every);
  SolveTrace& trace = tb.trace;
  Vector x = x0;
  Vector x_prev = x0;
  trace.x = x;
  trace.primal_value = f.value(x);

  for (int k = 0; k < opts.max_iters; ++k) {
    // Momentum point (equals the iterate for the plain method).
    Vector probe = x;
    if (accelerated && k > 0) {
      probe += detail::momentum_coefficient(k, opts.momentum_clip) * (x - x_prev);
    }
    const Vector g = f.gradient(probe);
    const ProjectionResult proj =
        dykstra_project(probe + g / L, poly, opts.projection_sweeps,
                        opts.projection_tol);
    trace.projection_sweeps += proj.sweeps;
    const double fx = f.value(x);
    const double dual_like = fx > 0.0 ? 1.0 / fx : 0.0;
    const double gap = tb.note(k, dual_like, fx, g.norm(), 1.0 / L);
    if (opts.observer) {
      opts.observer(IterationInfo{k, probe, x, dual_like, fx, g, 1.0 / L});
    }
    trace.iterations = k + 1;
    trace.x = x;
    trace.primal_value = fx;
    if (!proj.converged) {
      trace.status = SolveStatus::projection_failure;
      break;
    }
    if (opts.stop_tol > 0.0 && opts.p_star && gap <= opts.stop_tol) {
      trace.status = SolveStatus::tol_reached;
      break;
    }
    x_prev = x;
    x = proj.point;
  }
  return trace;
}

}  // namespace detail

inline SolveTrace projected_gradient(const SmoothFunction& f,
                                     const PolyhedralGauge& poly,
                                     const Vector& x0, double L,
                                     const BaselineOptions& opts = {}) {
  return detail::projected_ascent(f, poly, x0, L, opts, false);
}

inline SolveTrace accelerated_projected_gradient(
    const SmoothFunction& f, const PolyhedralGauge& poly, const Vector& x0,
    double L, const BaselineOptions& opts = {}) {
  return detail::projected_ascent(f, poly, x0, L, opts, true);
}

// Linear maximization oracle over an axis-aligned box, the one feasible-set
// family this library ships an exact oracle for.
inline std::function<Vector(const Vector&)> box_lmo(const Vector& lower,
                                                    const Vector& upper) {
  for (Eigen::Index i = 0; i < lower.size(); ++i) {
    if (!(lower[i] <= upper[i])) throw ConfigError("box_lmo: empty box");
  }
  return [lower, upper](const Vector& g) {
    Vector v(lower.size());
    for (Eigen::Index i = 0; i < lower.size(); ++i) {
      v[i] = g[i] > 0.0 ? upper[i] : lower[i];
    }
    return v;
  };
}

// Frank-Wolfe ascent with exact linesearch for quadratic objectives:
// beta = min(g . d / curvature(d), 1) where curvature(d) = d^T Q d. The
// linear minimization oracle is pluggable; x0 must be feasible for it.
inline SolveTrace frank_wolfe(const SmoothFunction& f,
                              const std::function<double(const Vector&)>& curvature,
                              const std::function<Vector(const Vector&)>& lmo,
                              const Vector& x0,
                              const BaselineOptions& opts = {}) {
  if (!f.gradient) throw ConfigError("frank_wolfe needs a gradient");
  detail::TraceBuilder tb(opts.p_star, opts.record_every);
  SolveTrace& trace = tb.trace;
  Vector x = x0;
  trace.x = x;
  trace.primal_value = f.value(x);

  for (int k = 0; k < opts.max_iters; ++k) {
    const Vector g = f.gradient(x);
    const Vector vertex = lmo(g);
    const Vector d = vertex - x;
    const double slope = g.dot(d);  // the Frank-Wolfe gap

    double beta = 0.0;
    if (slope > 0.0) {
      const double curv = curvature(d);
      beta = curv > 0.0 ? std::min(slope / curv, 1.0) : 1.0;
    }
    const double fx = f.value(x);
    const double dual_like = fx > 0.0 ? 1.0 / fx : 0.0;
    const double gap = tb.note(k, dual_like, fx, g.norm(), beta);
    if (opts.observer) {
      opts.observer(IterationInfo{k, x, x, dual_like, fx, g, beta});
    }
    trace.iterations = k + 1;
    trace.x = x;
    trace.primal_value = fx;
    if (slope <= 0.0) {
      trace.status = SolveStatus::stationary;
      break;
    }
    if (opts.stop_tol > 0.0 && opts.p_star && gap <= opts.stop_tol) {
      trace.status = SolveStatus::tol_reached;
      break;
    }
    x += beta * d;
  }
  return trace;
}

}  // namespace radial
