// radial: projection-free first-order methods for nonnegative maximization.
// Licensed under the Apache License, Version 2.0.
#pragma once

#include <Eigen/Eigenvalues>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <ostream>
#include <string>
#include <vector>

#include "radial/algorithms.hpp"
#include "radial/rng.hpp"

namespace radial {

// ---------------------------------------------------------------------------
// Deterministic instance generation.

// Concave quadratic over a random polytope. Determinism contract: a fixed
// seed yields the same instance on every platform, because the sampler is a
// fixed-algorithm Gaussian over mt19937_64 and the draw order is pinned to
// A (row-major), then P (row-major), then c. Box instances replace A with the
// stacked [-1, 1]^n constraints and draw only P and c. The factor width r is
// a parameter; 100 is the usual choice for this instance family.
struct QpGenConfig {
  Eigen::Index n = 100;  // variables
  Eigen::Index m = 400;  // constraint rows
  Eigen::Index r = 100;  // rank of Q = P P^T
  std::uint64_t seed = 1;
  double lambda = 1.0;
  bool box = false;
};

inline std::string instance_label(const QpGenConfig& cfg) {
  return "n" + std::to_string(cfg.n) + "_m" + std::to_string(cfg.m) + "_r" +
         std::to_string(cfg.r) + "_s" + std::to_string(cfg.seed) +
         (cfg.box ? "_box" : "");
}

inline QpInstance generate_qp(const QpGenConfig& cfg) {
  if (cfg.n <= 0 || cfg.m <= 0 || cfg.r < 0) {
    throw ConfigError("generate_qp: dimensions must be positive");
  }
  GaussianSampler gs(cfg.seed);
  QpInstance inst;
  if (cfg.box) {
    inst.A.resize(2 * cfg.n, cfg.n);
    inst.A << Matrix::Identity(cfg.n, cfg.n), -Matrix::Identity(cfg.n, cfg.n);
    inst.b = Vector::Ones(2 * cfg.n);
  } else {
    inst.A = gs.matrix(cfg.m, cfg.n);
    inst.b = Vector::Ones(cfg.m);
  }
  inst.P = gs.matrix(cfg.n, cfg.r);
  inst.c = gs.vector(cfg.n);
  inst.lambda = cfg.lambda;
  inst.validate();
  return inst;
}

// Largest eigenvalue of lambda * Q, the gradient Lipschitz constant of the
// quadratic objective. Factored instances go through P^T P, which shares the
// nonzero spectrum of Q at rank-size cost.
inline double qp_smoothness(const QpInstance& inst) {
  if (inst.has_factor()) {
    const Matrix gram = inst.P.transpose() * inst.P;
    Eigen::SelfAdjointEigenSolver<Matrix> es(gram, Eigen::EigenvaluesOnly);
    return inst.lambda * es.eigenvalues().maxCoeff();
  }
  if (inst.Qdense.size() == 0) return 0.0;
  Eigen::SelfAdjointEigenSolver<Matrix> es(inst.Qdense, Eigen::EigenvaluesOnly);
  return inst.lambda * es.eigenvalues().maxCoeff();
}

// The raw (untruncated) objective for projection-based baselines, which never
// leave the feasible region and so never need the nonnegative clamp.
inline SmoothFunction qp_smooth_function(const QpInstance& inst) {
  auto self = std::make_shared<const QpInstance>(inst);
  SmoothFunction f;
  f.dim = inst.dim();
  f.value = [self](const Vector& x) { return self->objective_raw(x); };
  f.gradient = [self](const Vector& x) {
    return (-self->lambda * (self->apply_Q(x) + self->c)).eval();
  };
  f.is_concave = inst.has_factor();
  return f;
}

// ---------------------------------------------------------------------------
// Reference solutions by smoothing continuation.

struct ReferenceOptions {
  double eta_start = 1e-2;
  double eta_end = 1e-9;
  double eta_factor = 0.1;
  int stage_iters = 120000;
  long max_total_iters = 1000000;
  // A stage ends early once this many iterations pass without improving the
  // smoothed value.
  int stall_window = 2000;
  bool squared_row_norms = true;
};

struct ReferenceSolution {
  double d_star = 0.0;
  double p_star = 0.0;
  Vector y_star;
  Vector x_star;
  bool primal_feasible = false;  // x_star checked against the duality sandwich
  int stages = 0;
  long iterations = 0;
  double final_eta = 0.0;
  // Optimistic bracket width around d_star from the softmax sandwich; a
  // diagnostic, not a certificate.
  double gap_estimate = 0.0;
};

// Minimizes the dual by accelerated descent on a sequence of softmax
// envelopes with decreasing eta, warm-starting each stage at the best dual
// point of the previous one. A single cold stage at the final eta would need
// stepsizes of order eta and cannot reach this accuracy within the budget;
// the continuation sidesteps that.
inline ReferenceSolution reference_solve(const RadialProblem& prob,
                                         const Vector& x0,
                                         double L, double D, double R,
                                         const ReferenceOptions& opts = {}) {
  for (const RadialPiece& p : prob.pieces) {
    if (!p.dual_smooth || !p.dual_subgradient) {
      throw ConfigError("reference_solve needs smooth dual pieces");
    }
  }
  double warm = 1.0;
  Vector y = detail::dual_start(prob.primal, x0, warm);
  ReferenceSolution out;
  out.y_star = y;
  out.d_star = prob.dual_value(y, warm).as_double();
  if (out.d_star == 0.0) {
    throw ConfigError("reference_solve: start certifies unboundedness");
  }

  const double terms =
      static_cast<double>(prob.pieces.size()) + static_cast<double>(prob.gauge.rows());
  SmoothedDual sd{prob.pieces, prob.gauge, opts.eta_start, 0.0};
  double stage_floor = 0.0;  // best softmax lower bound seen at the last stage
  for (double eta = opts.eta_start; eta >= opts.eta_end * (1.0 - 1e-12);
       eta *= opts.eta_factor) {
    sd.eta = eta;
    sd.L_eta = default_L_eta(L, D, R, sd.gauge, eta, opts.squared_row_norms);
    ++out.stages;
    out.final_eta = eta;

    Vector yk = out.y_star;  // warm start at the incumbent
    Vector y_grad_prev = yk;
    double stage_best = std::numeric_limits<double>::infinity();
    int since_improved = 0;
    for (int k = 0; k < opts.stage_iters; ++k) {
      if (out.iterations >= opts.max_total_iters) break;
      ++out.iterations;
      const SoftmaxEval sm = softmax_eval_grad(sd, yk);
      if (sm.value < stage_best - 1e-15 * std::abs(stage_best)) {
        stage_best = sm.value;
        since_improved = 0;
      } else if (++since_improved >= opts.stall_window) {
        break;
      }
      const double dv = prob.dual_value(yk, warm).as_double();
      if (dv > 0.0 && dv < out.d_star) {
        out.d_star = dv;
        out.y_star = yk;
        warm = dv;
      }
      const Vector y_grad = yk - sm.gradient / sd.L_eta;
      const double coef = detail::momentum_coefficient(k, false);
      yk = y_grad + coef * (y_grad - y_grad_prev);
      y_grad_prev = y_grad;
    }
    stage_floor = stage_best - eta * std::log(terms);
    if (out.iterations >= opts.max_total_iters) break;
  }
  out.p_star = 1.0 / out.d_star;
  out.x_star = detail::recover_inside(out.y_star, out.d_star).x;
  out.gap_estimate = std::max(0.0, out.d_star - stage_floor);
  const double fx = prob.primal.eval(out.x_star).as_double();
  // The recovery inflation shaves at most 1e-9 relative off the value; allow
  // twice that before declaring the point infeasible.
  out.primal_feasible = fx >= (1.0 - 2e-9) / out.d_star &&
                        (prob.gauge.rows() == 0 ||
                         prob.gauge.feasible(out.x_star, 1e-9));
  return out;
}

// ---------------------------------------------------------------------------
// Trace output. One row per recorded iteration; every numeric column except
// elapsed_seconds is a pure function of the inputs, so reruns agree byte for
// byte outside that column.

namespace detail {

inline void append_g17(std::string& s, double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  s += buf;
}

}  // namespace detail

inline constexpr const char* kTraceHeader =
    "k,dual_value,primal_value,rel_gap,subgrad_norm,step,elapsed_seconds";

inline void write_trace_csv(const SolveTrace& trace, std::ostream& os) {
  os << kTraceHeader << '\n';
  std::string line;
  for (const TraceRecord& r : trace.records) {
    line.clear();
    line += std::to_string(r.k);
    line += ',';
    detail::append_g17(line, r.dual_value);
    line += ',';
    detail::append_g17(line, r.primal_value);
    line += ',';
    detail::append_g17(line, r.rel_gap);
    line += ',';
    detail::append_g17(line, r.subgrad_norm);
    line += ',';
    detail::append_g17(line, r.step);
    line += ',';
    detail::append_g17(line, r.elapsed_seconds);
    line += '\n';
    os << line;
  }
}

inline void write_trace_csv(const SolveTrace& trace, const std::string& path) {
  std::ofstream os(path);
  if (!os) throw ConfigError("cannot open trace file: " + path);
  write_trace_csv(trace, os);
}

// ---------------------------------------------------------------------------
// Benchmark driver.

enum class BenchMethod {
  radial_subgradient,
  radial_smoothing,
  radial_accelerated,
  projected_gradient,
  accelerated_gradient,  // accelerated projected gradient
  frank_wolfe,
};

inline const char* to_string(BenchMethod m) {
  switch (m) {
    case BenchMethod::radial_subgradient: return "radial_subgradient";
    case BenchMethod::radial_smoothing: return "radial_smoothing";
    case BenchMethod::radial_accelerated: return "radial_accelerated";
    case BenchMethod::projected_gradient: return "projected_gradient";
    case BenchMethod::accelerated_gradient: return "accelerated_gradient";
    default: return "frank_wolfe";
  }
}

struct BenchConfig {
  std::vector<QpGenConfig> instances{QpGenConfig{}};
  std::vector<BenchMethod> methods;  // empty selects every applicable method
  int max_iters = 20000;
  double stop_tol = 1e-4;
  double eps = 1e-3;  // smoothing accuracy target, sets eta
  int record_every = 1;
  std::string out_dir;  // trace CSVs land here when nonempty
  ReferenceOptions reference;
};

struct BenchRow {
  std::string instance;
  std::string method;
  SolveStatus status = SolveStatus::iters_exhausted;
  int iterations = 0;
  double best_primal = 0.0;
  double best_rel_gap = 0.0;
  double elapsed_seconds = 0.0;
  long projection_sweeps = 0;
  std::string error;  // solver errors are recorded, not fatal
};

struct InstanceReport {
  QpGenConfig config;
  std::string label;
  double p_star = 0.0;
  double d_star = 0.0;
  ConditioningReport conditioning;
};

struct BenchReport {
  std::vector<InstanceReport> instances;
  std::vector<BenchRow> rows;
};

namespace detail {

inline bool bench_wants(const BenchConfig& cfg, BenchMethod m) {
  if (cfg.methods.empty()) {
    // By default skip the plain accelerated method, which only applies to
    // unconstrained single-piece duals.
    return m != BenchMethod::radial_accelerated;
  }
  for (BenchMethod want : cfg.methods) {
    if (want == m) return true;
  }
  return false;
}

inline void run_bench_instance(const BenchConfig& cfg, const QpGenConfig& gen,
                               BenchReport& report) {
  const QpInstance inst = generate_qp(gen);
  RadialProblem prob = from_qp(inst);
  const Vector x0 = Vector::Zero(inst.dim());

  const double L = qp_smoothness(inst);
  const std::vector<Vector> dirs = direction_set(inst.dim(), 512, gen.seed);
  const ConditioningReport cond = conditioning_report_qp(inst, dirs, L);
  // Sampled radii are upper estimates; shrink before they feed stepsizes.
  const double R_hat = 0.9 * cond.R.value;
  const double D_hat = cond.D.value;

  const ReferenceSolution ref =
      reference_solve(prob, x0, L, D_hat, R_hat, cfg.reference);
  if (!ref.primal_feasible) {
    throw ConfigError("reference solve produced an infeasible primal point");
  }
  prob.p_star = ref.p_star;

  InstanceReport ir;
  ir.config = gen;
  ir.label = instance_label(gen);
  ir.p_star = ref.p_star;
  ir.d_star = ref.d_star;
  ir.conditioning = cond;
  report.instances.push_back(ir);

  const bool trace_out = !cfg.out_dir.empty();
  if (trace_out) std::filesystem::create_directories(cfg.out_dir);
  auto emit = [&](BenchMethod method, auto&& runner) {
    if (!bench_wants(cfg, method)) return;
    BenchRow row;
    row.instance = ir.label;
    row.method = to_string(method);
    try {
      const SolveTrace t = runner();
      row.status = t.status;
      row.iterations = t.iterations;
      row.best_primal = t.best_primal;
      row.best_rel_gap = t.best_rel_gap;
      row.elapsed_seconds =
          t.records.empty() ? 0.0 : t.records.back().elapsed_seconds;
      row.projection_sweeps = t.projection_sweeps;
      if (trace_out) {
        write_trace_csv(t, cfg.out_dir + "/trace_" + ir.label + "_" +
                               row.method + ".csv");
      }
    } catch (const std::exception& e) {
      row.error = e.what();
    }
    report.rows.push_back(std::move(row));
  };

  emit(BenchMethod::radial_subgradient, [&] {
    SolveOptions so;
    so.max_iters = cfg.max_iters;
    so.stop_tol = cfg.stop_tol;
    so.record_every = cfg.record_every;
    return radial_subgradient(prob, x0, StepPolicy::polyak(ref.d_star), so);
  });
  emit(BenchMethod::radial_smoothing, [&] {
    const double terms =
        static_cast<double>(prob.pieces.size() +
                            static_cast<std::size_t>(prob.gauge.rows()));
    SmoothingOptions so;
    so.eta = cfg.eps / (2.0 * std::log(terms));
    so.L = L;
    so.D = D_hat;
    so.R = R_hat;
    so.max_iters = cfg.max_iters;
    so.stop_tol = cfg.stop_tol;
    so.record_every = cfg.record_every;
    return radial_smoothing(prob, x0, so);
  });
  emit(BenchMethod::radial_accelerated, [&] {
    // Rejected (and recorded) on constrained instances.
    AcceleratedOptions ao;
    ao.L = L;
    ao.D = D_hat;
    ao.R = R_hat;
    ao.max_iters = cfg.max_iters;
    ao.stop_tol = cfg.stop_tol;
    ao.record_every = cfg.record_every;
    return radial_accelerated(prob, x0, ao);
  });

  const SmoothFunction raw = qp_smooth_function(inst);
  BaselineOptions bo;
  bo.max_iters = cfg.max_iters;
  bo.stop_tol = cfg.stop_tol;
  bo.p_star = ref.p_star;
  bo.record_every = cfg.record_every;
  emit(BenchMethod::projected_gradient,
       [&] { return projected_gradient(raw, inst.gauge(), x0, L, bo); });
  emit(BenchMethod::accelerated_gradient, [&] {
    return accelerated_projected_gradient(raw, inst.gauge(), x0, L, bo);
  });
  if (gen.box) {
    emit(BenchMethod::frank_wolfe, [&] {
      auto curvature = [&inst](const Vector& d) {
        return inst.lambda * inst.quad_form(d);
      };
      const Vector lo = Vector::Constant(inst.dim(), -1.0);
      const Vector hi = Vector::Constant(inst.dim(), 1.0);
      return frank_wolfe(raw, curvature, box_lmo(lo, hi), x0, bo);
    });
  }
}

}  // namespace detail

inline BenchReport run_benchmark(const BenchConfig& cfg) {
  if (cfg.instances.empty()) throw ConfigError("bench config lists no instances");
  BenchReport report;
  for (const QpGenConfig& gen : cfg.instances) {
    detail::run_bench_instance(cfg, gen, report);
  }
  return report;
}

inline void write_bench_csv(const BenchReport& report, std::ostream& os) {
  os << "instance,method,status,iterations,best_primal,best_rel_gap,"
        "elapsed_seconds,projection_sweeps,error\n";
  std::string line;
  for (const BenchRow& row : report.rows) {
    line.clear();
    line += row.instance;
    line += ',';
    line += row.method;
    line += ',';
    line += to_string(row.status);
    line += ',';
    line += std::to_string(row.iterations);
    line += ',';
    detail::append_g17(line, row.best_primal);
    line += ',';
    detail::append_g17(line, row.best_rel_gap);
    line += ',';
    detail::append_g17(line, row.elapsed_seconds);
    line += ',';
    line += std::to_string(row.projection_sweeps);
    line += ',';
    line += row.error;
    line += '\n';
    os << line;
  }
}

}  // namespace radial
