// radial: projection-free first-order methods for nonnegative maximization.
// Licensed under the Apache License, Version 2.0.
#pragma once

#include <Eigen/Core>
#include <algorithm>
#include <cmath>
#include <functional>
#include <memory>
#include <numeric>
#include <optional>
#include <utility>
#include <vector>

#include "radial/core.hpp"

namespace radial {

// One branch of a composite objective together with its dual oracle. Pieces
// built from structured data carry closed-form duals; black-box pieces fall
// back to bisection. dual_value takes a warm-start hint that bisection-backed
// pieces feed to dual_eval; dual_subgradient takes the piece's dual value at
// y (so callers never trigger a second bisection).
struct RadialPiece {
  PrimalObjective primal;
  std::function<ExtReal(const Vector&, double)> dual_value;
  std::function<Vector(const Vector&, double)> dual_subgradient;  // may be empty
  bool dual_smooth = false;
};

inline RadialPiece piece_from_primal(const PrimalObjective& f,
                                     double eval_tolerance = 1e-10,
                                     double bracket_cap = 1e12) {
  DualObjective d{f, eval_tolerance, bracket_cap};
  RadialPiece piece;
  piece.primal = f;
  piece.dual_value = [d](const Vector& y, double warm) {
    return dual_eval(d, y, warm);
  };
  if (f.supgradient) {
    piece.dual_subgradient = [f](const Vector& y, double v) {
      return dual_subgradient_at(f, y, v);
    };
  }
  piece.dual_smooth = f.is_differentiable;
  return piece;
}

// Positive multiples of halfspaces: value max_i (a_i . y / b_i)_+ over rows
// of A x <= b with b > 0. This is both the Minkowski gauge of the polyhedron
// and the dual of its (inverted) indicator.
struct PolyhedralGauge {
  Matrix A;
  Vector b;

  Eigen::Index rows() const { return A.rows(); }

  void validate(Eigen::Index dim) const {
    if (A.rows() != b.size()) {
      throw ConfigError("polyhedral gauge: A row count must match b");
    }
    if (A.rows() > 0 && A.cols() != dim) {
      throw ConfigError("polyhedral gauge: A column count must match dim");
    }
    for (Eigen::Index i = 0; i < b.size(); ++i) {
      if (!(b[i] > 0.0) || !std::isfinite(b[i])) {
        throw ConfigError("polyhedral gauge: offsets b must be positive");
      }
    }
  }

  struct Evaluation {
    double value = 0.0;        // max over rows, clamped at zero
    Eigen::Index index = -1;   // lowest argmax row, -1 when value is zero
  };

  Evaluation eval(const Vector& y) const {
    Evaluation out;
    for (Eigen::Index i = 0; i < A.rows(); ++i) {
      const double r = A.row(i).dot(y) / b[i];
      if (r > out.value) {
        out.value = r;
        out.index = i;
      }
    }
    return out;
  }

  // Subgradient of the gauge: the argmax row scaled by 1/b, the zero vector
  // on the flat region where every row is nonpositive.
  Vector subgradient(const Vector& y) const {
    const Evaluation e = eval(y);
    if (e.index < 0) return Vector::Zero(y.size());
    return A.row(e.index).transpose() / b[e.index];
  }

  Vector row_direction(Eigen::Index i) const {
    return A.row(i).transpose() / b[i];
  }

  double max_row_norm() const {
    double m = 0.0;
    for (Eigen::Index i = 0; i < A.rows(); ++i) {
      m = std::max(m, A.row(i).norm() / b[i]);
    }
    return m;
  }

  bool feasible(const Vector& x, double tol = 0.0) const {
    for (Eigen::Index i = 0; i < A.rows(); ++i) {
      if (A.row(i).dot(x) > b[i] + tol * A.row(i).norm()) return false;
    }
    return true;
  }

  // Exact inradius about the origin: min_i b_i / ||a_i||.
  double inradius() const {
    double r = std::numeric_limits<double>::infinity();
    for (Eigen::Index i = 0; i < A.rows(); ++i) {
      const double n = A.row(i).norm();
      if (n > 0.0) r = std::min(r, b[i] / n);
    }
    return r;
  }
};

// Quadratic program in maximization form: maximize
//   1 - lambda (x^T Q x / 2 + c^T x)   subject to  A x <= b,
// with Q = P P^T when the factor is present. lambda is the radial rescale
// knob; 1 keeps the raw objective.
struct QpInstance {
  Matrix P;       // n x r factor, Q = P P^T (preferred; kept factored)
  Matrix Qdense;  // dense fallback when no factor is available
  Vector c;
  Matrix A;
  Vector b;
  double lambda = 1.0;

  Eigen::Index dim() const { return c.size(); }
  bool has_factor() const { return P.cols() > 0; }

  void validate() const {
    const Eigen::Index n = dim();
    if (n == 0) throw ConfigError("qp: empty linear term c");
    if (has_factor() && P.rows() != n) {
      throw ConfigError("qp: factor P must have n rows");
    }
    if (!has_factor() && Qdense.size() > 0 &&
        (Qdense.rows() != n || Qdense.cols() != n)) {
      throw ConfigError("qp: dense Q must be n x n");
    }
    if (!(lambda > 0.0) || !std::isfinite(lambda)) {
      throw ConfigError("qp: lambda must be positive");
    }
    gauge().validate(n);
  }

  double quad_form(const Vector& x) const {
    if (has_factor()) return (P.transpose() * x).squaredNorm();
    if (Qdense.size() > 0) return x.dot(Qdense * x);
    return 0.0;
  }

  Vector apply_Q(const Vector& x) const {
    if (has_factor()) return P * (P.transpose() * x);
    if (Qdense.size() > 0) return Qdense * x;
    return Vector::Zero(x.size());
  }

  double objective_raw(const Vector& x) const {
    return 1.0 - lambda * (0.5 * quad_form(x) + c.dot(x));
  }

  PolyhedralGauge gauge() const { return PolyhedralGauge{A, b}; }

  // The constrained objective as a single nonnegative function: the positive
  // part of the quadratic on the feasible polyhedron, zero outside it.
  PrimalObjective objective() const {
    auto self = std::make_shared<const QpInstance>(*this);
    PrimalObjective f;
    f.dim = dim();
    f.eval = [self](const Vector& x) {
      if (!self->gauge().feasible(x)) return ExtReal::zero();
      return ExtReal::from_value(self->objective_raw(x));
    };
    f.supgradient = [self](const Vector& x) {
      return (-self->lambda * (self->apply_Q(x) + self->c)).eval();
    };
    if (A.rows() == 0) {
      f.hessian = [self](const Vector& x) {
        const Eigen::Index n = x.size();
        if (self->has_factor()) {
          return (-self->lambda * self->P * self->P.transpose()).eval();
        }
        if (self->Qdense.size() > 0) return (-self->lambda * self->Qdense).eval();
        return Matrix::Zero(n, n).eval();
      };
      f.is_differentiable = true;
    }
    // A factored Q = P P^T is positive semidefinite, so the objective is
    // concave; a dense Q makes no such promise.
    f.is_concave = has_factor();
    return f;
  }
};

namespace detail {

struct QpQuad {
  double s = 0.0, q = 0.0, disc = 0.0, value = 0.0;
};

inline QpQuad qp_quad_piece_value(const QpInstance& inst, const Vector& y) {
  QpQuad out;
  out.s = inst.lambda * inst.c.dot(y) + 1.0;
  out.q = inst.lambda * inst.quad_form(y);
  out.disc = out.s * out.s + 2.0 * out.q;
  out.value = out.disc >= 0.0
                  ? std::max(0.0, 0.5 * (out.s + std::sqrt(out.disc)))
                  : 0.0;
  return out;
}

}  // namespace detail

// Closed-form dual of the quadratic piece combined with the constraint rows:
// max of (s + sqrt(s^2 + 2q))/2 over s = lambda c.y + 1, q = lambda y^T Q y
// (zero when the square root argument is negative) and the polyhedral gauge.
inline ExtReal qp_dual_value(const QpInstance& inst, const Vector& y) {
  const double quad = detail::qp_quad_piece_value(inst, y).value;
  const double g = inst.gauge().eval(y).value;
  return ExtReal::from_value(std::max(quad, g));
}

// Subgradient of the dual at y. The active piece is selected by value with
// ties resolved toward the quadratic piece and then toward lower row index.
inline Vector qp_dual_subgradient(const QpInstance& inst, const Vector& y) {
  const detail::QpQuad quad = detail::qp_quad_piece_value(inst, y);
  const PolyhedralGauge::Evaluation g = inst.gauge().eval(y);
  const double best = std::max(quad.value, g.value);
  if (!(best > 0.0)) {
    throw ConfigError("qp_dual_subgradient: dual value is not positive");
  }
  if (quad.value >= g.value) {
    if (quad.disc == 0.0) {
      throw SingularityError(
          "qp dual kink: s^2 + 2q is exactly zero; treat the point with the "
          "linear pieces instead");
    }
    const Vector grad_inner = quad.s * inst.c + 2.0 * inst.apply_Q(y);
    return 0.5 * inst.lambda * (inst.c + grad_inner / std::sqrt(quad.disc));
  }
  return inst.gauge().row_direction(g.index);
}

inline RadialPiece qp_quadratic_piece(const QpInstance& inst) {
  auto self = std::make_shared<const QpInstance>(inst);
  RadialPiece piece;
  {
    // Unconstrained quadratic branch as a primal objective.
    PrimalObjective f;
    f.dim = inst.dim();
    f.eval = [self](const Vector& x) {
      return ExtReal::from_value(self->objective_raw(x));
    };
    f.supgradient = [self](const Vector& x) {
      return (-self->lambda * (self->apply_Q(x) + self->c)).eval();
    };
    f.is_differentiable = true;
    piece.primal = f;
  }
  piece.dual_value = [self](const Vector& y, double) {
    return ExtReal::from_value(detail::qp_quad_piece_value(*self, y).value);
  };
  piece.dual_subgradient = [self](const Vector& y, double) {
    const detail::QpQuad quad = detail::qp_quad_piece_value(*self, y);
    if (quad.disc <= 0.0) {
      throw SingularityError("qp quadratic piece: dual kink or empty branch");
    }
    const Vector grad_inner = quad.s * self->c + 2.0 * self->apply_Q(y);
    return (0.5 * self->lambda * (self->c + grad_inner / std::sqrt(quad.disc)))
        .eval();
  };
  piece.dual_smooth = true;
  return piece;
}

// Star-convex set described by a membership oracle. Star shape is with
// respect to the origin: x in S implies t x in S for t in [0, 1].
struct StarConvexSet {
  Eigen::Index dim = 0;
  std::function<bool(const Vector&)> contains;
};

// Minkowski gauge inf{ t >= 0 : y in t S } by bisection on the membership
// oracle. Returns +inf when no multiple of S up to bracket_cap captures y.
inline double gauge_of_set(const StarConvexSet& S, const Vector& y,
                           double tol = 1e-10, double bracket_cap = 1e12) {
  if (!S.contains) throw ConfigError("gauge_of_set: missing membership oracle");
  if (!S.contains(Vector::Zero(S.dim))) {
    throw ConfigError("gauge_of_set: set must contain the origin");
  }
  if (y.isZero(0.0)) return 0.0;
  const double floor = 1.0 / bracket_cap;
  auto member = [&](double t) { return S.contains((y / t).eval()); };

  double lo, hi;  // member(lo) false, member(hi) true
  if (member(1.0)) {
    hi = 1.0;
    for (;;) {
      if (hi <= floor) return 0.0;  // every tiny multiple works
      lo = std::max(0.5 * hi, floor);
      if (!member(lo)) break;
      hi = lo;
    }
  } else {
    lo = 1.0;
    for (;;) {
      if (lo >= bracket_cap) return std::numeric_limits<double>::infinity();
      hi = std::min(2.0 * lo, bracket_cap);
      if (member(hi)) break;
      lo = hi;
    }
  }
  while (hi - lo > tol * hi) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    if (member(mid)) {
      hi = mid;
    } else {
      lo = mid;
    }
  }
  return hi;  // the safe side: y / hi is in S
}

// Indicator piece of a star-convex set in the inverted convention used for
// composites: +inf inside the set, zero outside. Its dual is the gauge.
inline RadialPiece star_indicator_piece(const StarConvexSet& S,
                                        double tol = 1e-10,
                                        double bracket_cap = 1e12) {
  RadialPiece piece;
  piece.primal.dim = S.dim;
  piece.primal.eval = [S](const Vector& x) {
    return S.contains(x) ? ExtReal::infinity() : ExtReal::zero();
  };
  piece.dual_value = [S, tol, bracket_cap](const Vector& y, double) {
    const double g = gauge_of_set(S, y, tol, bracket_cap);
    if (std::isinf(g)) return ExtReal::infinity();
    return ExtReal::from_value(g);
  };
  return piece;
}

// Smooth extended-real function in its raw (possibly negative) form, the
// input to translate_truncate and lambda_rescale. value may return -inf to
// mark points outside the domain.
struct SmoothFunction {
  Eigen::Index dim = 0;
  std::function<double(const Vector&)> value;
  std::function<Vector(const Vector&)> gradient;
  std::function<Matrix(const Vector&)> hessian;
  bool is_concave = false;
};

// Recenters a raw objective into the nonnegative form the radial transform
// needs: g(x) = (f(x + anchor) - level)_+. The anchor must be strictly above
// the level so g is positive at the origin.
inline PrimalObjective translate_truncate(const SmoothFunction& f,
                                          const Vector& anchor, double level) {
  if (!f.value) throw ConfigError("translate_truncate: missing value oracle");
  const double at_anchor = f.value(anchor);
  if (!(at_anchor > level) || !std::isfinite(at_anchor)) {
    throw ConfigError(
        "translate_truncate: anchor value must be finite and above the level");
  }
  PrimalObjective g;
  g.dim = f.dim;
  g.eval = [f, anchor, level](const Vector& x) {
    return ExtReal::from_value(f.value(x + anchor) - level);
  };
  if (f.gradient) {
    g.supgradient = [f, anchor](const Vector& x) {
      return f.gradient(x + anchor);
    };
    g.is_differentiable = true;
  }
  if (f.hessian) {
    g.hessian = [f, anchor](const Vector& x) { return f.hessian(x + anchor); };
  }
  g.is_concave = f.is_concave;
  return g;
}

// Poisson log-likelihood sum_i b_i log(a_i . x) - a_i . x over the open cone
// where every rate a_i . x is positive; -inf outside.
inline SmoothFunction poisson_loglik(const Matrix& A, const Vector& counts) {
  if (A.rows() != counts.size()) {
    throw ConfigError("poisson_loglik: row count of A must match counts");
  }
  for (Eigen::Index i = 0; i < counts.size(); ++i) {
    if (!(counts[i] >= 0.0)) {
      throw ConfigError("poisson_loglik: counts must be nonnegative");
    }
  }
  SmoothFunction f;
  f.dim = A.cols();
  f.value = [A, counts](const Vector& x) {
    double total = 0.0;
    for (Eigen::Index i = 0; i < A.rows(); ++i) {
      const double rate = A.row(i).dot(x);
      if (!(rate > 0.0)) return -std::numeric_limits<double>::infinity();
      total += counts[i] * std::log(rate) - rate;
    }
    return total;
  };
  f.gradient = [A, counts](const Vector& x) {
    Vector g = Vector::Zero(x.size());
    for (Eigen::Index i = 0; i < A.rows(); ++i) {
      const double rate = A.row(i).dot(x);
      g += (counts[i] / rate - 1.0) * A.row(i).transpose();
    }
    return g;
  };
  f.hessian = [A, counts](const Vector& x) {
    Matrix H = Matrix::Zero(x.size(), x.size());
    for (Eigen::Index i = 0; i < A.rows(); ++i) {
      const double rate = A.row(i).dot(x);
      H -= (counts[i] / (rate * rate)) *
           (A.row(i).transpose() * A.row(i));
    }
    return H;
  };
  f.is_concave = true;
  return f;
}

// SCAD penalty: linear up to lam, a quadratic blend up to a*lam, constant
// beyond. Continuous at both joins.
inline double scad_penalty(double t, double lam, double a) {
  if (!(lam > 0.0) || !(a > 2.0)) {
    throw ConfigError("scad_penalty requires lam > 0 and a > 2");
  }
  const double s = std::abs(t);
  if (s <= lam) return lam * s;
  if (s <= a * lam) {
    return (-s * s + 2.0 * a * lam * s - lam * lam) / (2.0 * (a - 1.0));
  }
  return 0.5 * (a + 1.0) * lam * lam;
}

// lq "bridge" penalty lam * |t|^q with 0 < q <= 1.
inline double lq_penalty(double t, double lam, double q) {
  if (!(lam > 0.0) || !(q > 0.0) || !(q <= 1.0)) {
    throw ConfigError("lq_penalty requires lam > 0 and q in (0, 1]");
  }
  return lam * std::pow(std::abs(t), q);
}

inline std::function<double(const Vector&)> elementwise_penalty(
    std::function<double(double)> sigma) {
  return [sigma = std::move(sigma)](const Vector& x) {
    double total = 0.0;
    for (Eigen::Index i = 0; i < x.size(); ++i) total += sigma(x[i]);
    return total;
  };
}

// (f - r)_+ for a nonnegative objective f and a nonnegative penalty r. The
// result is typically nonconcave; only the value oracle is exposed, which is
// all the bisection dual needs.
inline PrimalObjective regularized_objective(
    const PrimalObjective& f, std::function<double(const Vector&)> penalty) {
  PrimalObjective g;
  g.dim = f.dim;
  g.eval = [f, penalty](const Vector& x) {
    const ExtReal fx = f.eval(x);
    if (!fx.is_finite()) return fx;  // zero stays zero, inf stays inf
    return ExtReal::from_value(fx.value() - penalty(x));
  };
  return g;
}

// min over pieces, dualized as the max of the piece duals.
struct CompositeObjective {
  std::vector<RadialPiece> pieces;

  Eigen::Index dim() const {
    return pieces.empty() ? 0 : pieces.front().primal.dim;
  }

  PrimalObjective primal() const {
    auto parts = std::make_shared<const std::vector<RadialPiece>>(pieces);
    PrimalObjective f;
    f.dim = dim();
    bool all_concave = true;
    bool have_supgrads = true;
    for (const RadialPiece& p : *parts) {
      all_concave = all_concave && p.primal.is_concave;
      have_supgrads = have_supgrads && bool(p.primal.supgradient);
    }
    f.eval = [parts](const Vector& x) {
      ExtReal best = ExtReal::infinity();
      for (const RadialPiece& p : *parts) {
        const ExtReal v = p.primal.eval(x);
        if (v < best) best = v;
      }
      return best;
    };
    if (have_supgrads) {
      f.supgradient = [parts](const Vector& x) {
        ExtReal best = ExtReal::infinity();
        std::size_t arg = 0;
        for (std::size_t i = 0; i < parts->size(); ++i) {
          const ExtReal v = (*parts)[i].primal.eval(x);
          if (v < best) {
            best = v;
            arg = i;
          }
        }
        return (*parts)[arg].primal.supgradient(x);
      };
    }
    f.is_concave = all_concave;
    return f;
  }

  ExtReal dual_value(const Vector& y, double warm = 1.0) const {
    ExtReal best = ExtReal::zero();
    for (const RadialPiece& p : pieces) {
      const ExtReal v = p.dual_value(y, warm);
      if (v > best) best = v;
    }
    return best;
  }

  Vector dual_subgradient(const Vector& y, double warm = 1.0) const {
    ExtReal best = ExtReal::zero();
    std::size_t arg = pieces.size();
    for (std::size_t i = 0; i < pieces.size(); ++i) {
      const ExtReal v = pieces[i].dual_value(y, warm);
      if (v > best) {
        best = v;
        arg = i;
      }
    }
    if (arg == pieces.size() || !best.is_finite()) {
      throw ConfigError("composite dual subgradient: no finite active piece");
    }
    if (!pieces[arg].dual_subgradient) {
      throw ConfigError("composite dual subgradient: active piece has none");
    }
    return pieces[arg].dual_subgradient(y, best.value());
  }
};

inline CompositeObjective min_compose(std::vector<RadialPiece> pieces) {
  if (pieces.empty()) throw ConfigError("min_compose: no pieces");
  return CompositeObjective{std::move(pieces)};
}

// Trimmed aggregate: the mean of the best (size - drop) piece values, the
// robust counterpart of the plain mean. Ties between equal values keep the
// lowest sample index.
inline PrimalObjective trimmed_objective(std::vector<PrimalObjective> pieces,
                                         int drop) {
  const int s = static_cast<int>(pieces.size());
  if (s == 0 || drop < 0 || drop >= s) {
    throw ConfigError("trimmed_objective requires 0 <= drop < pieces");
  }
  const int keep = s - drop;
  auto parts = std::make_shared<const std::vector<PrimalObjective>>(
      std::move(pieces));

  auto select = [parts, keep](const Vector& x) {
    std::vector<std::pair<ExtReal, int>> vals;
    vals.reserve(parts->size());
    for (int i = 0; i < static_cast<int>(parts->size()); ++i) {
      vals.emplace_back((*parts)[static_cast<std::size_t>(i)].eval(x), i);
    }
    std::stable_sort(vals.begin(), vals.end(),
                     [](const auto& a, const auto& b) { return a.first > b.first; });
    vals.resize(static_cast<std::size_t>(keep));
    return vals;
  };

  PrimalObjective f;
  f.dim = parts->front().dim;
  f.eval = [select, keep](const Vector& x) {
    double total = 0.0;
    for (const auto& [v, idx] : select(x)) {
      if (v.is_infinite()) return ExtReal::infinity();
      if (v.is_finite()) total += v.value();
    }
    return ExtReal::from_value(total / keep);
  };
  bool have_supgrads = true;
  for (const PrimalObjective& p : *parts) {
    have_supgrads = have_supgrads && bool(p.supgradient);
  }
  if (have_supgrads) {
    f.supgradient = [parts, select, keep](const Vector& x) {
      Vector g = Vector::Zero(x.size());
      for (const auto& [v, idx] : select(x)) {
        g += (*parts)[static_cast<std::size_t>(idx)].supgradient(x);
      }
      return (g / keep).eval();
    };
  }
  return f;
}

// Rescale a raw (possibly sign-indefinite) smooth objective into the radial
// form (1 + lambda f)_+. The scale is calibrated on a sample cloud: lambda
// stays below half of 1 / max(grad f(x) . x - f(x)), the quantity whose
// positivity would break strict radiality.
struct RescaleResult {
  double lambda = 1.0;
  PrimalObjective objective;
};

inline RescaleResult lambda_rescale(const SmoothFunction& f,
                                    const std::vector<Vector>& samples) {
  if (!f.value || !f.gradient) {
    throw ConfigError("lambda_rescale needs value and gradient oracles");
  }
  if (samples.empty()) {
    throw ConfigError("lambda_rescale: empty sample cloud");
  }
  double worst = -std::numeric_limits<double>::infinity();
  for (const Vector& x : samples) {
    const double fx = f.value(x);
    if (!std::isfinite(fx)) {
      throw ConfigError("lambda_rescale: sample outside the objective domain");
    }
    worst = std::max(worst, f.gradient(x).dot(x) - fx);
  }
  RescaleResult out;
  out.lambda = worst > 0.0 ? 0.5 / worst : 1.0;

  const double lam = out.lambda;
  PrimalObjective g;
  g.dim = f.dim;
  g.eval = [f, lam](const Vector& x) {
    return ExtReal::from_value(1.0 + lam * f.value(x));
  };
  g.supgradient = [f, lam](const Vector& x) {
    return (lam * f.gradient(x)).eval();
  };
  if (f.hessian) {
    g.hessian = [f, lam](const Vector& x) {
      return (lam * f.hessian(x)).eval();
    };
  }
  g.is_differentiable = true;
  g.is_concave = f.is_concave;
  out.objective = g;
  return out;
}

// ---------------------------------------------------------------------------
// Analytic instances with known duals, used as references throughout the
// tests and the conditioning probes.

// f(x) = sqrt(1 - |x|^2)_+ with dual sqrt(1 + |y|^2).
inline RadialPiece sqrt_ball_piece(Eigen::Index n) {
  RadialPiece piece;
  PrimalObjective f;
  f.dim = n;
  f.eval = [](const Vector& x) {
    return ExtReal::from_value(
        std::sqrt(std::max(0.0, 1.0 - x.squaredNorm())));
  };
  f.supgradient = [](const Vector& x) {
    const double v = std::sqrt(1.0 - x.squaredNorm());
    return (-x / v).eval();
  };
  f.hessian = [](const Vector& x) {
    const double v = std::sqrt(1.0 - x.squaredNorm());
    const Eigen::Index n = x.size();
    return (-Matrix::Identity(n, n) / v - x * x.transpose() / (v * v * v))
        .eval();
  };
  f.is_concave = true;
  f.is_differentiable = true;
  piece.primal = f;
  piece.dual_value = [](const Vector& y, double) {
    return ExtReal::finite(std::sqrt(1.0 + y.squaredNorm()));
  };
  piece.dual_subgradient = [](const Vector& y, double) {
    return (y / std::sqrt(1.0 + y.squaredNorm())).eval();
  };
  piece.dual_smooth = true;
  return piece;
}

// f(x) = sqrt(1 - x^T Q x)_+ with dual sqrt(1 + y^T Q y)_+.
inline RadialPiece sqrt_quadratic_piece(const Matrix& Q) {
  auto Qp = std::make_shared<const Matrix>(Q);
  RadialPiece piece;
  PrimalObjective f;
  f.dim = Q.rows();
  f.eval = [Qp](const Vector& x) {
    return ExtReal::from_value(
        std::sqrt(std::max(0.0, 1.0 - x.dot(*Qp * x))));
  };
  f.supgradient = [Qp](const Vector& x) {
    const double v = std::sqrt(1.0 - x.dot(*Qp * x));
    return (-(*Qp * x) / v).eval();
  };
  f.hessian = [Qp](const Vector& x) {
    const double v = std::sqrt(1.0 - x.dot(*Qp * x));
    const Vector qx = *Qp * x;
    return (-(*Qp) / v - qx * qx.transpose() / (v * v * v)).eval();
  };
  f.is_concave = true;  // meaningful when Q is positive semidefinite
  f.is_differentiable = true;
  piece.primal = f;
  piece.dual_value = [Qp](const Vector& y, double) {
    const double arg = 1.0 + y.dot(*Qp * y);
    if (arg <= 0.0) return ExtReal::zero();
    return ExtReal::finite(std::sqrt(arg));
  };
  piece.dual_subgradient = [Qp](const Vector& y, double) {
    return ((*Qp * y) / std::sqrt(1.0 + y.dot(*Qp * y))).eval();
  };
  piece.dual_smooth = true;
  return piece;
}

// Sharp cone cap f(x) = (1 - |x|)_+ with dual 1 + |y|.
inline RadialPiece norm_cap_piece(Eigen::Index n) {
  RadialPiece piece;
  PrimalObjective f;
  f.dim = n;
  f.eval = [](const Vector& x) {
    return ExtReal::from_value(1.0 - x.norm());
  };
  f.supgradient = [](const Vector& x) {
    const double n2 = x.norm();
    if (n2 == 0.0) return Vector::Zero(x.size()).eval();  // supdifferential at the peak
    return (-x / n2).eval();
  };
  f.is_concave = true;
  piece.primal = f;
  piece.dual_value = [](const Vector& y, double) {
    return ExtReal::finite(1.0 + y.norm());
  };
  piece.dual_subgradient = [](const Vector& y, double) {
    const double n2 = y.norm();
    if (n2 == 0.0) return Vector::Zero(y.size()).eval();
    return (y / n2).eval();
  };
  return piece;
}

// Growth family f(x) = (1 - |x|^p)_+, p >= 1; no closed-form dual is
// attached, so dual access goes through bisection.
inline PrimalObjective norm_power_objective(Eigen::Index n, double p) {
  if (!(p >= 1.0)) throw ConfigError("norm_power_objective requires p >= 1");
  PrimalObjective f;
  f.dim = n;
  f.eval = [p](const Vector& x) {
    return ExtReal::from_value(1.0 - std::pow(x.norm(), p));
  };
  f.supgradient = [p](const Vector& x) {
    const double r = x.norm();
    if (r == 0.0) return Vector::Zero(x.size()).eval();
    return (-p * std::pow(r, p - 2.0) * x).eval();
  };
  f.is_concave = true;
  f.is_differentiable = p > 1.0;
  return f;
}

// ---------------------------------------------------------------------------
// Solver-facing bundle: the full primal objective plus its dual pieces, with
// linear constraint rows kept apart so smoothing can treat them specially.

struct RadialProblem {
  PrimalObjective primal;
  std::vector<RadialPiece> pieces;  // nonlinear dual pieces
  PolyhedralGauge gauge;            // linear rows, may be empty
  std::optional<double> p_star;     // known optimum, when available

  Eigen::Index dim() const { return primal.dim; }

  // Dual value together with the active piece: indices < pieces.size() name
  // a nonlinear piece, larger ones name gauge row (index - pieces.size()).
  struct ActiveDual {
    ExtReal value;
    std::ptrdiff_t active = -1;
  };

  ActiveDual dual_active(const Vector& y, double warm = 1.0) const {
    ActiveDual out{ExtReal::zero(), -1};
    for (std::size_t i = 0; i < pieces.size(); ++i) {
      const ExtReal v = pieces[i].dual_value(y, warm);
      if (v > out.value) {
        out.value = v;
        out.active = static_cast<std::ptrdiff_t>(i);
      }
    }
    if (gauge.rows() > 0) {
      const PolyhedralGauge::Evaluation g = gauge.eval(y);
      if (g.index >= 0 && ExtReal::from_value(g.value) > out.value) {
        out.value = ExtReal::finite(g.value);
        out.active = static_cast<std::ptrdiff_t>(pieces.size()) + g.index;
      }
    }
    return out;
  }

  ExtReal dual_value(const Vector& y, double warm = 1.0) const {
    return dual_active(y, warm).value;
  }

  Vector dual_subgradient(const Vector& y, const ActiveDual& at) const {
    if (at.active < 0 || !at.value.is_finite()) {
      throw ConfigError("dual_subgradient: no finite active piece");
    }
    const auto np = static_cast<std::ptrdiff_t>(pieces.size());
    if (at.active < np) {
      const RadialPiece& p = pieces[static_cast<std::size_t>(at.active)];
      if (!p.dual_subgradient) {
        throw ConfigError("dual_subgradient: active piece has no oracle");
      }
      return p.dual_subgradient(y, at.value.value());
    }
    return gauge.row_direction(at.active - np);
  }
};

inline RadialProblem from_qp(const QpInstance& inst) {
  inst.validate();
  RadialProblem prob;
  prob.primal = inst.objective();
  prob.pieces.push_back(qp_quadratic_piece(inst));
  prob.gauge = inst.gauge();
  return prob;
}

inline RadialProblem from_primal(const PrimalObjective& f,
                                 double eval_tolerance = 1e-10,
                                 double bracket_cap = 1e12) {
  RadialProblem prob;
  prob.primal = f;
  prob.pieces.push_back(piece_from_primal(f, eval_tolerance, bracket_cap));
  return prob;
}

inline RadialProblem from_piece(const RadialPiece& piece) {
  RadialProblem prob;
  prob.primal = piece.primal;
  prob.pieces.push_back(piece);
  return prob;
}

}  // namespace radial
