// radial: projection-free first-order methods for nonnegative maximization.
// Licensed under the Apache License, Version 2.0.
#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <memory>
#include <vector>

#include "radial/algorithms.hpp"
#include "radial/conditioning.hpp"
#include "radial/problems.hpp"
#include "radial/rng.hpp"

namespace {

using radial::ExtReal;
using radial::Matrix;
using radial::PrimalObjective;
using radial::QpInstance;
using radial::RadialProblem;
using radial::SolveStatus;
using radial::SolveTrace;
using radial::StepPolicy;
using radial::Vector;

Vector vec2(double a, double b) {
  Vector v(2);
  v << a, b;
  return v;
}

// f(x) = (x1 + 1)_+, unbounded above along e1; its dual hits the zero tag.
PrimalObjective affine_positive_part(Eigen::Index n) {
  PrimalObjective f;
  f.dim = n;
  f.eval = [](const Vector& x) { return ExtReal::from_value(x[0] + 1.0); };
  f.supgradient = [](const Vector& x) {
    Vector g = Vector::Zero(x.size());
    g[0] = 1.0;
    return g;
  };
  f.is_concave = true;
  f.is_differentiable = true;
  return f;
}

// maximize 1 - (|x|^2 / 2 - x1 / 2) in one variable: optimum 1.125 at 1/2.
QpInstance tilted_scalar_qp() {
  QpInstance inst;
  inst.P = Matrix::Ones(1, 1);
  inst.c = Vector::Constant(1, -0.5);
  inst.A = Matrix(0, 1);
  inst.b = Vector(0);
  return inst;
}

}  // namespace

TEST_CASE("step policies") {
  SECTION("values") {
    REQUIRE(StepPolicy::polyak(1.0).step(3.0, 4.0) == Catch::Approx(0.5));
    REQUIRE(StepPolicy::relative(0.1).step(3.0, 4.0) == Catch::Approx(0.075));
    REQUIRE(StepPolicy::nonconvex(0.1).step(3.0, 4.0) == Catch::Approx(0.025));
    REQUIRE(StepPolicy::constant_step(0.7).step(3.0, 4.0) == 0.7);
  }

  SECTION("an unset polyak target is rejected at use") {
    REQUIRE_THROWS_AS(StepPolicy::polyak_unset().step(1.0, 1.0),
                      radial::ConfigError);
  }

  SECTION("constructor validation") {
    REQUIRE_THROWS_AS(StepPolicy::relative(0.0), radial::ConfigError);
    REQUIRE_THROWS_AS(StepPolicy::nonconvex(-1.0), radial::ConfigError);
    REQUIRE_THROWS_AS(StepPolicy::constant_step(0.0), radial::ConfigError);
  }

  SECTION("momentum coefficient starts at -1/2") {
    REQUIRE(radial::detail::momentum_coefficient(0, false) == -0.5);
    REQUIRE(radial::detail::momentum_coefficient(0, true) == 0.0);
    REQUIRE(radial::detail::momentum_coefficient(1, false) == 0.0);
    REQUIRE(radial::detail::momentum_coefficient(5, false) ==
            Catch::Approx(4.0 / 7.0));
  }
}

TEST_CASE("polyak step solves the sharp cone cap in one move") {
  RadialProblem prob = radial::from_piece(radial::norm_cap_piece(10));
  prob.p_star = 1.0;
  Vector x0 = Vector::Zero(10);
  x0[0] = 0.9;  // f = 0.1, so y0 = 9 e1 and the dual value is 10

  const SolveTrace t =
      radial::radial_subgradient(prob, x0, StepPolicy::polyak(1.0));
  // One exact Polyak step lands on y = 0; the next iteration sees a zero
  // subgradient and stops.
  REQUIRE(t.status == SolveStatus::stationary);
  REQUIRE(t.iterations == 2);
  REQUIRE(t.records[0].dual_value == Catch::Approx(10.0));
  REQUIRE(t.records[1].dual_value == Catch::Approx(1.0));
  REQUIRE(t.primal_value == Catch::Approx(1.0));
  REQUIRE(t.best_rel_gap <= 1e-12);
  REQUIRE(t.x.norm() <= 1e-12);
}

TEST_CASE("subgradient iterates satisfy the descent inequality") {
  // Composite of two pieces whose dual is max(sqrt(1 + |y|^2), 1 + |y|);
  // the minimum is 1 at y* = 0.
  RadialProblem prob;
  prob.primal = radial::min_compose({radial::sqrt_ball_piece(2),
                                     radial::norm_cap_piece(2)})
                    .primal();
  prob.pieces = {radial::sqrt_ball_piece(2), radial::norm_cap_piece(2)};
  const double d_star = 1.0;

  std::vector<Vector> ys, zetas;
  std::vector<double> steps, vals;
  radial::SolveOptions opts;
  opts.max_iters = 30;
  opts.observer = [&](const radial::IterationInfo& info) {
    ys.push_back(info.y);
    zetas.push_back(info.direction);
    steps.push_back(info.step);
    vals.push_back(info.dual_value);
  };

  SECTION("generic relative steps") {
    radial::radial_subgradient(prob, vec2(0.5, 0.3), StepPolicy::relative(0.05),
                               opts);
    REQUIRE(ys.size() >= 2);
    for (std::size_t k = 0; k + 1 < ys.size(); ++k) {
      const double lhs = ys[k + 1].squaredNorm();
      const double rhs = ys[k].squaredNorm() -
                         2.0 * steps[k] * (vals[k] - d_star) +
                         steps[k] * steps[k] * zetas[k].squaredNorm();
      REQUIRE(lhs <= rhs + 1e-9);
    }
  }

  SECTION("polyak steps never move away from the minimizer") {
    radial::radial_subgradient(prob, vec2(0.5, 0.3), StepPolicy::polyak(d_star),
                               opts);
    for (std::size_t k = 0; k + 1 < ys.size(); ++k) {
      REQUIRE(ys[k + 1].norm() <= ys[k].norm() + 1e-12);
    }
  }
}

TEST_CASE("a zero dual value stops with an unboundedness certificate") {
  const RadialProblem prob =
      radial::from_primal(affine_positive_part(2));
  radial::SolveOptions opts;
  opts.max_iters = 100;
  // The dual subgradient is -e1 wherever the dual is positive, so constant
  // steps of 1/4 walk y1 through 0.25, 0.5, 0.75 onto 1.0 exactly, where the
  // dual value hits the zero tag.
  const SolveTrace t = radial::radial_subgradient(
      prob, Vector::Zero(2), StepPolicy::constant_step(0.25), opts);
  REQUIRE(t.status == SolveStatus::unbounded_certificate);
  REQUIRE(t.iterations == 4);
  REQUIRE(t.certificate.has_value());
  REQUIRE((*t.certificate)[0] == Catch::Approx(1.0));
  REQUIRE(t.records.size() == 4);
  REQUIRE(t.records[3].dual_value == Catch::Approx(0.25).epsilon(1e-9));
}

TEST_CASE("subgradient stop rules") {
  RadialProblem prob = radial::from_piece(radial::sqrt_ball_piece(2));
  prob.p_star = 1.0;

  SECTION("a zero subgradient reports stationarity") {
    const SolveTrace t = radial::radial_subgradient(
        prob, Vector::Zero(2), StepPolicy::relative(0.1));
    REQUIRE(t.status == SolveStatus::stationary);
    REQUIRE(t.iterations == 1);
    REQUIRE(t.primal_value == Catch::Approx(1.0));
  }

  SECTION("polyak with an overestimated target stops immediately") {
    const SolveTrace t = radial::radial_subgradient(
        prob, vec2(0.6, 0.0), StepPolicy::polyak(2.0));
    REQUIRE(t.status == SolveStatus::tol_reached);
    REQUIRE(t.iterations == 1);
    REQUIRE(t.records[0].step == 0.0);
  }

  SECTION("relative gap stop with a known optimum") {
    radial::SolveOptions opts;
    opts.max_iters = 200;
    opts.stop_tol = 1e-6;
    const SolveTrace t = radial::radial_subgradient(
        prob, vec2(0.75, 0.0), StepPolicy::polyak(1.0), opts);
    REQUIRE(t.status == SolveStatus::tol_reached);
    REQUIRE(t.iterations < 100);
    REQUIRE(t.best_rel_gap <= 1e-6);
  }

  SECTION("subgradient norm stop for nonconvex runs") {
    RadialProblem blind = prob;  // no reference value, no gap stop
    blind.p_star.reset();
    radial::SolveOptions opts;
    opts.max_iters = 500;
    opts.stop_tol = 0.05;
    opts.lipschitz_dual = 1.0;
    const SolveTrace t = radial::radial_subgradient(
        blind, vec2(0.6, 0.0), StepPolicy::nonconvex(0.01), opts);
    REQUIRE(t.status == SolveStatus::stationary);
    REQUIRE(t.best_subgrad_norm <= 0.05);
  }

  SECTION("without the lipschitz constant the norm stop is disabled") {
    RadialProblem blind = prob;
    blind.p_star.reset();
    radial::SolveOptions opts;
    opts.max_iters = 50;
    opts.stop_tol = 0.05;
    const SolveTrace t = radial::radial_subgradient(
        blind, vec2(0.6, 0.0), StepPolicy::nonconvex(0.01), opts);
    REQUIRE(t.status == SolveStatus::iters_exhausted);
    REQUIRE(t.iterations == 50);
  }
}

TEST_CASE("trace recording") {
  RadialProblem prob = radial::from_piece(radial::sqrt_ball_piece(2));

  SECTION("record_every thins the trace but not the running bests") {
    prob.p_star = 1.0;
    radial::SolveOptions opts;
    opts.max_iters = 10;
    opts.record_every = 3;
    const SolveTrace t = radial::radial_subgradient(
        prob, vec2(0.6, 0.0), StepPolicy::relative(0.05), opts);
    REQUIRE(t.records.size() == 4);  // k = 0, 3, 6, 9
    for (std::size_t i = 0; i < t.records.size(); ++i) {
      REQUIRE(t.records[i].k == static_cast<int>(3 * i));
    }
    REQUIRE(t.best_primal >= t.records.back().primal_value - 1e-15);
    for (std::size_t i = 1; i < t.records.size(); ++i) {
      REQUIRE(t.records[i].elapsed_seconds >=
              t.records[i - 1].elapsed_seconds);
    }
  }

  SECTION("without a reference optimum the relative gap is the -1 sentinel") {
    const SolveTrace t = radial::radial_subgradient(
        prob, vec2(0.6, 0.0), StepPolicy::relative(0.05));
    for (const auto& r : t.records) REQUIRE(r.rel_gap == -1.0);
    REQUIRE(std::isinf(t.best_rel_gap));
  }

  SECTION("status labels are stable") {
    REQUIRE(std::string(radial::to_string(SolveStatus::iters_exhausted)) ==
            "iters_exhausted");
    REQUIRE(std::string(radial::to_string(SolveStatus::tol_reached)) ==
            "tol_reached");
    REQUIRE(std::string(radial::to_string(
                SolveStatus::unbounded_certificate)) == "unbounded_certificate");
    REQUIRE(std::string(radial::to_string(SolveStatus::stationary)) ==
            "stationary");
    REQUIRE(std::string(radial::to_string(SolveStatus::projection_failure)) ==
            "projection_failure");
  }
}

TEST_CASE("recovered iterates stay feasible on constrained instances") {
  radial::GaussianSampler gauss(29);
  QpInstance inst;
  inst.A = gauss.matrix(6, 3);
  inst.b = Vector::Ones(6);
  inst.P = gauss.matrix(3, 2);
  inst.c = 0.1 * gauss.vector(3);
  inst.validate();
  RadialProblem prob = radial::from_qp(inst);
  const radial::PolyhedralGauge gauge = inst.gauge();

  int seen = 0;
  radial::SolveOptions opts;
  opts.max_iters = 150;
  opts.observer = [&](const radial::IterationInfo& info) {
    ++seen;
    REQUIRE(gauge.feasible(info.x, 1e-9));
    REQUIRE(info.primal_value > 0.0);
    // Recovery guarantees at least the reciprocal dual value; when a
    // constraint row is the active piece the objective can sit above it.
    REQUIRE(info.primal_value >= (1.0 - 1e-8) / info.dual_value);
  };
  const SolveTrace t = radial::radial_subgradient(
      prob, Vector::Zero(3), StepPolicy::relative(0.05), opts);
  REQUIRE(seen == t.iterations);
  for (const auto& r : t.records) REQUIRE(r.primal_value > 0.0);
}

TEST_CASE("accelerated method on a smooth dual") {
  SECTION("first iterate follows the verbatim momentum recursion") {
    // On the sqrt ball from x0 = (0.6, 0): y0 = (0.75, 0), gradient (0.6, 0).
    // With unit stepsize the gradient point is (0.15, 0) and the k = 0
    // coefficient -1/2 reflects it out to (0.45, 0).
    RadialProblem prob = radial::from_piece(radial::sqrt_ball_piece(2));
    radial::AcceleratedOptions opts;
    opts.step_smoothness = 1.0;
    opts.max_iters = 2;
    Vector y1;
    opts.observer = [&](const radial::IterationInfo& info) {
      if (info.k == 1) y1 = info.y;
    };
    radial::radial_accelerated(prob, vec2(0.6, 0.0), opts);
    REQUIRE((y1 - vec2(0.45, 0.0)).norm() <= 1e-12);

    opts.momentum_clip = true;
    radial::radial_accelerated(prob, vec2(0.6, 0.0), opts);
    REQUIRE((y1 - vec2(0.15, 0.0)).norm() <= 1e-12);
  }

  SECTION("converges on the ball with the carried smoothness bound") {
    RadialProblem prob = radial::from_piece(radial::sqrt_ball_piece(2));
    prob.p_star = 1.0;
    radial::AcceleratedOptions opts;
    opts.L = 1.0;
    opts.D = 1.0;
    opts.R = 1.0;  // stepsize 1 / 8
    opts.max_iters = 300;
    const SolveTrace t = radial::radial_accelerated(prob, vec2(0.6, 0.0), opts);
    REQUIRE(t.best_rel_gap <= 1e-6);
    REQUIRE(t.records.back().dual_value == Catch::Approx(1.0).margin(1e-5));
  }

  SECTION("rejects composites, constraint rows and nonsmooth pieces") {
    RadialProblem two;
    two.primal = radial::sqrt_ball_piece(2).primal;
    two.pieces = {radial::sqrt_ball_piece(2), radial::sqrt_ball_piece(2)};
    REQUIRE_THROWS_AS(
        radial::radial_accelerated(two, Vector::Zero(2), {}),
        radial::ConfigError);

    RadialProblem gauged = radial::from_piece(radial::sqrt_ball_piece(2));
    gauged.gauge.A = Matrix::Ones(1, 2);
    gauged.gauge.b = Vector::Ones(1);
    REQUIRE_THROWS_AS(
        radial::radial_accelerated(gauged, Vector::Zero(2), {}),
        radial::ConfigError);

    RadialProblem kinked = radial::from_piece(radial::norm_cap_piece(2));
    REQUIRE_THROWS_AS(
        radial::radial_accelerated(kinked, Vector::Zero(2), {}),
        radial::ConfigError);
  }

  SECTION("drives an anchored likelihood to its known optimum") {
    Matrix A(3, 2);
    A << 2.0, -1.0, 1.0, 1.0, -1.0, 2.0;
    const radial::SmoothFunction raw =
        radial::poisson_loglik(A, Vector::Ones(3));
    const Vector peak = vec2(0.75, 0.75);  // stationary point of the raw model
    const double level = raw.value(peak) - 0.5;
    const PrimalObjective g = radial::translate_truncate(raw, peak, level);
    RadialProblem prob = radial::from_primal(g);
    prob.p_star = 0.5;  // g(0) = 0.5 and 0 is the maximizer

    // Conditioning numbers sampled the same way certify would get them.
    const auto dirs = radial::direction_set(2, 16, 3);
    const auto rep = radial::conditioning_report(g, dirs);
    const auto crossings = radial::directional_zero_crossings(g, dirs);
    std::vector<Vector> pts;
    for (std::size_t i = 0; i < dirs.size(); ++i) {
      for (double frac : {0.0, 0.5, 0.9, 0.99}) {
        pts.push_back(frac * crossings[i] * dirs[i]);
      }
    }
    const double L_hat = 1.5 * radial::sampled_hessian_bound(g, pts);

    radial::AcceleratedOptions opts;
    opts.L = L_hat;
    opts.D = rep.D.value;
    opts.R = 0.9 * rep.R.value;
    opts.max_iters = 20000;
    opts.record_every = 10;
    const SolveTrace t =
        radial::radial_accelerated(prob, vec2(0.15, -0.1), opts);
    REQUIRE(t.best_rel_gap <= 1e-4);
    double dual_best = std::numeric_limits<double>::infinity();
    for (const auto& r : t.records) dual_best = std::min(dual_best, r.dual_value);
    REQUIRE(dual_best == Catch::Approx(2.0).epsilon(1e-4));
  }
}

TEST_CASE("softmax envelope of the dual pieces") {
  SECTION("a single piece is reproduced exactly") {
    radial::SmoothedDual sd;
    sd.pieces = {radial::sqrt_ball_piece(2)};
    sd.eta = 0.05;
    const Vector y = vec2(0.4, -0.3);
    const auto sm = radial::softmax_eval_grad(sd, y);
    const double want = std::sqrt(1.0 + y.squaredNorm());
    REQUIRE(sm.value == Catch::Approx(want).epsilon(1e-14));
    REQUIRE((sm.gradient - y / want).norm() <= 1e-14);
  }

  SECTION("two identical pieces add exactly eta log 2") {
    radial::SmoothedDual sd;
    sd.pieces = {radial::sqrt_ball_piece(2), radial::sqrt_ball_piece(2)};
    sd.eta = 0.05;
    const Vector y = vec2(0.4, -0.3);
    const auto sm = radial::softmax_eval_grad(sd, y);
    const double base = std::sqrt(1.0 + y.squaredNorm());
    REQUIRE(sm.value ==
            Catch::Approx(base + 0.05 * std::log(2.0)).epsilon(1e-12));
  }

  SECTION("the envelope sandwiches the true dual") {
    radial::SmoothedDual sd;
    sd.pieces = {radial::sqrt_ball_piece(2), radial::norm_cap_piece(2)};
    sd.gauge.A = Matrix(1, 2);
    sd.gauge.A << 2.0, 0.0;
    sd.gauge.b = Vector::Ones(1);
    sd.eta = 0.01;
    const double bound = sd.eta * std::log(3.0);
    radial::GaussianSampler gauss(37);
    for (int k = 0; k < 100; ++k) {
      const Vector y = 2.0 * gauss.vector(2);
      double truth = std::max(std::sqrt(1.0 + y.squaredNorm()), 1.0 + y.norm());
      truth = std::max(truth, sd.gauge.eval(y).value);
      const auto sm = radial::softmax_eval_grad(sd, y);
      REQUIRE(sm.value >= truth - 1e-12);
      REQUIRE(sm.value <= truth + bound + 1e-12);
    }
  }

  SECTION("default smoothed stepsize constant") {
    radial::PolyhedralGauge gauge;
    gauge.A = Matrix::Constant(1, 1, 2.0);
    gauge.b = Vector::Ones(1);
    REQUIRE(radial::default_L_eta(1.0, 1.0, 1.0, gauge, 0.1, true) ==
            Catch::Approx(48.0));  // 8 + max(1, 4) / 0.1
    REQUIRE(radial::default_L_eta(1.0, 1.0, 1.0, gauge, 0.1, false) ==
            Catch::Approx(28.0));  // 8 + max(1, 2) / 0.1
    REQUIRE_THROWS_AS(radial::default_L_eta(1.0, 1.0, 1.0, gauge, 0.0),
                      radial::ConfigError);
  }
}

TEST_CASE("smoothing solver") {
  SECTION("validation") {
    RadialProblem kinked = radial::from_piece(radial::norm_cap_piece(2));
    radial::SmoothingOptions opts;
    opts.L_eta = 1.0;
    REQUIRE_THROWS_AS(radial::radial_smoothing(kinked, Vector::Zero(2), opts),
                      radial::ConfigError);

    RadialProblem prob = radial::from_piece(radial::sqrt_ball_piece(2));
    radial::SmoothingOptions none;  // neither L_eta nor (L, D, R)
    REQUIRE_THROWS_AS(radial::radial_smoothing(prob, Vector::Zero(2), none),
                      radial::ConfigError);

    radial::SmoothingOptions bad_eta;
    bad_eta.L_eta = 1.0;
    bad_eta.eta = 0.0;
    REQUIRE_THROWS_AS(radial::radial_smoothing(prob, Vector::Zero(2), bad_eta),
                      radial::ConfigError);
  }

  SECTION("with one piece it matches plain accelerated descent") {
    // The softmax of a single term is that term, so smoothing and the
    // accelerated method walk identical trajectories given the same stepsize.
    RadialProblem prob = radial::from_qp(tilted_scalar_qp());
    prob.p_star = 1.125;
    const Vector x0 = Vector::Zero(1);

    radial::SmoothingOptions so;
    so.eta = 1e-7;  // irrelevant for a single term
    so.L_eta = 27.0;
    so.max_iters = 2000;
    const SolveTrace sm = radial::radial_smoothing(prob, x0, so);

    radial::AcceleratedOptions ao;
    ao.step_smoothness = 27.0;
    ao.max_iters = 2000;
    const SolveTrace acc = radial::radial_accelerated(prob, x0, ao);

    REQUIRE(sm.best_rel_gap <= 1e-8);
    REQUIRE(sm.primal_value == Catch::Approx(acc.primal_value).epsilon(1e-12));
    REQUIRE(sm.records.back().dual_value ==
            Catch::Approx(1.0 / 1.125).epsilon(1e-8));
  }

  SECTION("constrained instances converge and stay feasible") {
    QpInstance inst;
    inst.P = Matrix::Identity(2, 2);
    inst.c = vec2(-1.0, 0.0);
    inst.A = Matrix(1, 2);
    inst.A << 1.0, 0.0;
    inst.b = Vector::Constant(1, 0.5);
    inst.validate();
    RadialProblem prob = radial::from_qp(inst);
    // Optimum at (0.5, 0) on the constraint face: 1 - (0.125 - 0.5) = 1.375.
    prob.p_star = 1.375;
    const radial::PolyhedralGauge gauge = inst.gauge();

    radial::SmoothingOptions so;
    so.eta = 1e-4;
    so.L = 1.0;
    so.D = 1.5;   // a safe upper bound on the sampled diameter
    so.R = 0.45;  // 0.9 of the exact inradius
    so.max_iters = 20000;
    so.record_every = 100;
    so.observer = [&](const radial::IterationInfo& info) {
      REQUIRE(gauge.feasible(info.x, 1e-9));
      REQUIRE(info.primal_value > 0.0);
    };
    const SolveTrace t = radial::radial_smoothing(prob, Vector::Zero(2), so);
    REQUIRE(t.best_primal == Catch::Approx(1.375).margin(1e-3));
  }

  SECTION("certifies unboundedness through the zero tag") {
    const RadialProblem prob = radial::from_primal(affine_positive_part(2));
    radial::SmoothingOptions so;
    so.L_eta = 1.0;
    so.max_iters = 50;
    const SolveTrace t = radial::radial_smoothing(prob, Vector::Zero(2), so);
    REQUIRE(t.status == SolveStatus::unbounded_certificate);
    REQUIRE(t.certificate.has_value());
    REQUIRE((*t.certificate)[0] >= 1.0);
  }
}

TEST_CASE("dykstra projection") {
  radial::PolyhedralGauge poly;

  SECTION("two active halfspaces meet at a corner") {
    poly.A = Matrix(2, 2);
    poly.A << 1.0, 1.0, 1.0, -1.0;
    poly.b = Vector::Ones(2);
    const auto res = radial::dykstra_project(vec2(2.0, 0.0), poly);
    REQUIRE(res.converged);
    REQUIRE((res.point - vec2(1.0, 0.0)).norm() <= 1e-9);
  }

  SECTION("boxes clamp coordinatewise") {
    poly.A = Matrix(4, 2);
    poly.A << 1.0, 0.0, 0.0, 1.0, -1.0, 0.0, 0.0, -1.0;
    poly.b = Vector::Ones(4);
    const auto res = radial::dykstra_project(vec2(3.0, -5.0), poly);
    REQUIRE(res.converged);
    REQUIRE((res.point - vec2(1.0, -1.0)).norm() <= 1e-9);
  }

  SECTION("a single halfspace reduces to the closed form") {
    poly.A = Matrix(1, 2);
    poly.A << 1.0, 2.0;
    poly.b = Vector::Ones(1);
    const Vector z = vec2(2.0, 1.0);
    // z - (a.z - b) a / |a|^2 with a.z - b = 3.
    const Vector want = z - (3.0 / 5.0) * vec2(1.0, 2.0);
    const auto res = radial::dykstra_project(z, poly);
    REQUIRE(res.converged);
    REQUIRE((res.point - want).norm() <= 1e-12);
  }

  SECTION("one active row among several inactive ones") {
    poly.A = Matrix(3, 2);
    poly.A << 1.0, 2.0, -1.0, 0.0, 0.0, -1.0;
    poly.b = Vector(3);
    poly.b << 2.0, 0.5, 0.25;
    const auto res = radial::dykstra_project(vec2(2.0, 2.0), poly);
    REQUIRE(res.converged);
    REQUIRE((res.point - vec2(1.2, 0.4)).norm() <= 1e-9);
  }

  SECTION("feasible points and empty systems are fixed points") {
    poly.A = Matrix(1, 2);
    poly.A << 1.0, 0.0;
    poly.b = Vector::Ones(1);
    const auto res = radial::dykstra_project(vec2(0.2, 9.0), poly);
    REQUIRE(res.converged);
    REQUIRE(res.sweeps == 1);
    REQUIRE((res.point - vec2(0.2, 9.0)).norm() == 0.0);

    radial::PolyhedralGauge empty;
    empty.A = Matrix(0, 2);
    empty.b = Vector(0);
    const auto triv = radial::dykstra_project(vec2(1.0, 1.0), empty);
    REQUIRE(triv.converged);
    REQUIRE(triv.sweeps == 0);
  }

  SECTION("a zero sweep budget reports failure") {
    poly.A = Matrix(1, 2);
    poly.A << 1.0, 0.0;
    poly.b = Vector::Ones(1);
    const auto res = radial::dykstra_project(vec2(5.0, 0.0), poly, 0);
    REQUIRE(!res.converged);
  }
}

TEST_CASE("projected gradient baselines") {
  // maximize 1 + x - x^2/2 subject to x <= 1/2: optimum 1.375 at the bound.
  radial::SmoothFunction f;
  f.dim = 1;
  f.value = [](const Vector& x) { return 1.0 + x[0] - 0.5 * x[0] * x[0]; };
  f.gradient = [](const Vector& x) {
    return Vector::Constant(1, 1.0 - x[0]).eval();
  };
  radial::PolyhedralGauge poly;
  poly.A = Matrix::Ones(1, 1);
  poly.b = Vector::Constant(1, 0.5);

  SECTION("reaches the constrained optimum in one projected step") {
    radial::BaselineOptions opts;
    opts.p_star = 1.375;
    opts.stop_tol = 1e-12;
    opts.max_iters = 50;
    const SolveTrace t =
        radial::projected_gradient(f, poly, Vector::Zero(1), 1.0, opts);
    REQUIRE(t.status == SolveStatus::tol_reached);
    REQUIRE(t.iterations == 2);
    REQUIRE(t.x[0] == Catch::Approx(0.5));
    REQUIRE(t.primal_value == Catch::Approx(1.375));
    REQUIRE(t.projection_sweeps > 0);
  }

  SECTION("the accelerated variant reaches the same point") {
    radial::BaselineOptions opts;
    opts.p_star = 1.375;
    opts.stop_tol = 1e-10;
    opts.max_iters = 100;
    const SolveTrace t = radial::accelerated_projected_gradient(
        f, poly, Vector::Zero(1), 1.0, opts);
    REQUIRE(t.status == SolveStatus::tol_reached);
    REQUIRE(t.best_primal == Catch::Approx(1.375).epsilon(1e-9));
  }

  SECTION("projection failure is reported, not hidden") {
    radial::BaselineOptions opts;
    opts.projection_sweeps = 0;  // forbid any projection work
    const SolveTrace t =
        radial::projected_gradient(f, poly, Vector::Zero(1), 1.0, opts);
    REQUIRE(t.status == SolveStatus::projection_failure);
    REQUIRE(t.iterations == 1);
  }

  SECTION("validation") {
    REQUIRE_THROWS_AS(
        radial::projected_gradient(f, poly, Vector::Zero(1), 0.0, {}),
        radial::ConfigError);
    radial::SmoothFunction no_grad = f;
    no_grad.gradient = nullptr;
    REQUIRE_THROWS_AS(
        radial::projected_gradient(no_grad, poly, Vector::Zero(1), 1.0, {}),
        radial::ConfigError);
  }
}

TEST_CASE("frank-wolfe with exact linesearch") {
  // maximize 1 + x - x^2/2 over [-1, 3]: interior optimum at x = 1.
  radial::SmoothFunction f;
  f.dim = 1;
  f.value = [](const Vector& x) { return 1.0 + x[0] - 0.5 * x[0] * x[0]; };
  f.gradient = [](const Vector& x) {
    return Vector::Constant(1, 1.0 - x[0]).eval();
  };
  auto curvature = [](const Vector& d) { return d.squaredNorm(); };
  const auto lmo = radial::box_lmo(Vector::Constant(1, -1.0),
                                   Vector::Constant(1, 3.0));

  SECTION("the exact linesearch lands on the interior optimum") {
    const SolveTrace t =
        radial::frank_wolfe(f, curvature, lmo, Vector::Zero(1), {});
    // From 0 the vertex is 3, the slope 3 and the curvature 9: beta = 1/3
    // lands exactly on x = 1, where the next gap is zero.
    REQUIRE(t.status == SolveStatus::stationary);
    REQUIRE(t.iterations == 2);
    REQUIRE(t.x[0] == Catch::Approx(1.0));
    REQUIRE(t.records[0].step == Catch::Approx(1.0 / 3.0));
    REQUIRE(t.primal_value == Catch::Approx(1.5));
  }

  SECTION("objective values never decrease") {
    radial::SmoothFunction g;
    g.dim = 2;
    g.value = [](const Vector& x) {
      return 1.0 - 0.5 * ((x[0] - 2.0) * (x[0] - 2.0) +
                          2.0 * (x[1] - 0.3) * (x[1] - 0.3));
    };
    g.gradient = [](const Vector& x) {
      return vec2(2.0 - x[0], 2.0 * (0.3 - x[1])).eval();
    };
    auto curv2 = [](const Vector& d) {
      return d[0] * d[0] + 2.0 * d[1] * d[1];
    };
    const auto lmo2 = radial::box_lmo(Vector::Constant(2, -1.0),
                                      Vector::Constant(2, 1.0));
    radial::BaselineOptions opts;
    opts.max_iters = 5000;
    const SolveTrace t =
        radial::frank_wolfe(g, curv2, lmo2, Vector::Zero(2), opts);
    for (std::size_t i = 1; i < t.records.size(); ++i) {
      REQUIRE(t.records[i].primal_value >=
              t.records[i - 1].primal_value - 1e-12);
    }

    // Cross-check against projected gradient on the same instance: the
    // boxed optimum is (1, 0.3) with value 0.5.
    radial::PolyhedralGauge box;
    box.A = Matrix(4, 2);
    box.A << 1.0, 0.0, 0.0, 1.0, -1.0, 0.0, 0.0, -1.0;
    box.b = Vector::Ones(4);
    radial::BaselineOptions popts;
    popts.max_iters = 500;
    const SolveTrace pg =
        radial::projected_gradient(g, box, Vector::Zero(2), 2.0, popts);
    REQUIRE(pg.best_primal == Catch::Approx(0.5).margin(1e-9));
    REQUIRE(t.best_primal == Catch::Approx(0.5).margin(5e-3));
  }

  SECTION("box oracle validation") {
    REQUIRE_THROWS_AS(
        radial::box_lmo(Vector::Ones(1), Vector::Zero(1)),
        radial::ConfigError);
    radial::SmoothFunction no_grad = f;
    no_grad.gradient = nullptr;
    REQUIRE_THROWS_AS(
        radial::frank_wolfe(no_grad, curvature, lmo, Vector::Zero(1), {}),
        radial::ConfigError);
  }
}

TEST_CASE("solvers make a bounded number of oracle calls per iteration") {
  SECTION("closed-form piece: one value and one subgradient per iteration") {
    auto value_calls = std::make_shared<int>(0);
    auto subgrad_calls = std::make_shared<int>(0);
    radial::RadialPiece counted = radial::norm_cap_piece(3);
    counted.dual_value = [inner = counted.dual_value, value_calls](
                             const Vector& y, double warm) {
      ++*value_calls;
      return inner(y, warm);
    };
    counted.dual_subgradient = [inner = counted.dual_subgradient,
                                subgrad_calls](const Vector& y, double v) {
      ++*subgrad_calls;
      return inner(y, v);
    };
    RadialProblem prob = radial::from_piece(counted);
    Vector x0 = Vector::Zero(3);
    x0[0] = 0.5;
    radial::SolveOptions opts;
    opts.max_iters = 40;
    const SolveTrace t =
        radial::radial_subgradient(prob, x0, StepPolicy::relative(0.1), opts);
    REQUIRE(t.iterations == 40);
    REQUIRE(*value_calls == 40);
    REQUIRE(*subgrad_calls == 40);
  }

  SECTION("bisection piece: primal evaluations per iteration stay bounded") {
    auto evals = std::make_shared<int>(0);
    PrimalObjective f = radial::sqrt_ball_piece(3).primal;
    f.eval = [inner = f.eval, evals](const Vector& x) {
      ++*evals;
      return inner(x);
    };
    RadialProblem prob = radial::from_primal(f);
    Vector x0 = Vector::Zero(3);
    x0[0] = 0.5;
    radial::SolveOptions opts;
    opts.max_iters = 40;
    radial::radial_subgradient(prob, x0, StepPolicy::relative(0.1), opts);
    REQUIRE(*evals <= 40 * 60);
  }
}
