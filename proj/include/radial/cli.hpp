// radial: projection-free first-order methods for nonnegative maximization.
// Licensed under the Apache License, Version 2.0.
#pragma once

#include <CLI11.hpp>
#include <cstdio>
#include <iostream>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "radial/io.hpp"

namespace radial {
namespace detail {

inline std::string fmt6(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

// Recovers box bounds from a gauge whose rows are all single-coordinate,
// the shape the Frank-Wolfe oracle supports.
inline std::optional<std::pair<Vector, Vector>> detect_box(
    const PolyhedralGauge& gauge, Eigen::Index dim) {
  const double inf = std::numeric_limits<double>::infinity();
  Vector lower = Vector::Constant(dim, -inf);
  Vector upper = Vector::Constant(dim, inf);
  for (Eigen::Index i = 0; i < gauge.rows(); ++i) {
    Eigen::Index col = -1;
    for (Eigen::Index k = 0; k < dim; ++k) {
      if (gauge.A(i, k) != 0.0) {
        if (col >= 0) return std::nullopt;  // more than one coordinate
        col = k;
      }
    }
    if (col < 0) continue;  // zero row constrains nothing (b > 0)
    const double a = gauge.A(i, col);
    if (a > 0.0) {
      upper[col] = std::min(upper[col], gauge.b[i] / a);
    } else {
      lower[col] = std::max(lower[col], gauge.b[i] / a);
    }
  }
  for (Eigen::Index k = 0; k < dim; ++k) {
    if (!std::isfinite(lower[k]) || !std::isfinite(upper[k])) {
      return std::nullopt;
    }
  }
  return std::make_pair(std::move(lower), std::move(upper));
}

struct SolveFlags {
  std::string file;
  std::string method = "subgradient";
  std::string policy = "relative";
  std::string row_norms = "squared";
  std::optional<std::uint64_t> seed;
  double eps = 1e-2;
  std::optional<double> alpha;
  std::optional<double> d_star;
  std::optional<double> eta;
  std::optional<double> L_eta;
  std::optional<double> L, D, R;
  std::optional<double> step_smoothness;
  std::optional<double> lipschitz_dual;
  bool momentum_clip = false;
  int max_iters = 1000;
  double stop_tol = 0.0;
  int record_every = 1;
  std::string trace_path;
};

// Conditioning with exact smoothness for quadratics, sampled bounds
// otherwise. Probes are origin-centered, so problems are expected to be
// anchored with the origin strictly inside the domain.
inline ConditioningReport solve_conditioning(const LoadedProblem& lp) {
  const std::vector<Vector> dirs =
      direction_set(lp.prob.dim(), 256, lp.seed);
  if (lp.qp) {
    return conditioning_report_qp(*lp.qp, dirs, qp_smoothness(*lp.qp));
  }
  ConditioningReport rep = conditioning_report(lp.prob.primal, dirs);
  if (lp.prob.primal.hessian) {
    std::vector<Vector> points;
    const std::size_t n_dirs = std::min<std::size_t>(dirs.size(), 32);
    for (std::size_t i = 0; i < n_dirs; ++i) {
      for (double t : {0.0, 0.3, 0.6, 0.9}) {
        points.push_back(t * rep.R.value * dirs[i]);
      }
    }
    rep.L = sampled_hessian_bound(lp.prob.primal, points);
  }
  return rep;
}

inline int run_check(const std::string& file, std::optional<std::uint64_t> seed,
                     int n_random, double grid_lo, double grid_hi,
                     int grid_count, double eps_mono, std::ostream& out) {
  const LoadedProblem lp = load_problem(file, seed);
  const std::vector<Vector> dirs =
      direction_set(lp.prob.dim(), n_random, lp.seed);
  const std::vector<double> grid = log_v_grid(grid_lo, grid_hi, grid_count);
  const RadialityReport report =
      check_upper_radial(lp.prob.primal, dirs, grid, eps_mono);

  std::size_t shown = 0;
  for (const RadialityWitness& w : report.monotonicity_violations) {
    if (++shown > 5) break;
    out << "  monotonicity violation: v " << fmt6(w.v1) << " -> " << fmt6(w.v2)
        << ", perspective " << w.value1 << " -> " << w.value2 << "\n";
  }
  out << "check: " << (report.pass() ? "PASS" : "FAIL")
      << " directions=" << report.directions_checked
      << " monotonicity_violations=" << report.monotonicity_violations.size()
      << " strictness_failures=" << report.strictness_failures.size() << "\n";
  return report.pass() ? 0 : 1;
}

inline int run_certify(const std::string& file,
                       std::optional<std::uint64_t> seed, std::ostream& out) {
  const LoadedProblem lp = load_problem(file, seed);
  const ConditioningReport rep = solve_conditioning(lp);
  out << "R = " << fmt6(rep.R.value) << " (" << to_string(rep.R.provenance)
      << ")\n";
  out << "D = " << fmt6(rep.D.value) << " (" << to_string(rep.D.provenance)
      << ")\n";
  out << "lipschitz_dual = " << fmt6(rep.lipschitz_dual()) << "\n";
  if (rep.L) {
    out << "L = " << fmt6(*rep.L) << "\n";
    out << "smooth_dual_bound = " << fmt6(*rep.smooth_dual_bound()) << "\n";
  }
  return 0;
}

inline StepPolicy make_policy(const SolveFlags& flags,
                              const LoadedProblem& lp) {
  if (flags.policy == "polyak") {
    if (flags.d_star) return StepPolicy::polyak(*flags.d_star);
    if (lp.prob.p_star) return StepPolicy::polyak(1.0 / *lp.prob.p_star);
    return StepPolicy::polyak_unset();  // rejected at the first step
  }
  if (flags.policy == "relative") return StepPolicy::relative(flags.eps);
  if (flags.policy == "nonconvex") return StepPolicy::nonconvex(flags.eps);
  if (flags.policy == "constant") {
    if (!flags.alpha) throw ConfigError("constant policy needs --alpha");
    return StepPolicy::constant_step(*flags.alpha);
  }
  throw ConfigError("unknown policy: " + flags.policy);
}

// Canonical method names with the short forms accepted as aliases.
inline std::string normalize_method(std::string m) {
  for (char& ch : m) {
    if (ch == '_') ch = '-';
  }
  if (m == "radial-subgradient") return "subgradient";
  if (m == "radial-smoothing") return "smoothing";
  if (m == "radial-accelerated") return "accelerated";
  if (m == "projected-gradient") return "projected";
  if (m == "accelerated-gradient" || m == "accelerated-projected")
    return "accelerated-projected";
  return m;
}

inline int run_solve(const SolveFlags& flags, std::ostream& out) {
  const std::string method = normalize_method(flags.method);
  LoadedProblem lp = load_problem(flags.file, flags.seed);
  std::optional<ConditioningReport> cond;
  auto conditioning = [&]() -> const ConditioningReport& {
    if (!cond) cond = solve_conditioning(lp);
    return *cond;
  };
  // Sampled radius estimates are upper bounds, so shrink before stepsizes.
  auto R_hat = [&]() { return flags.R ? *flags.R : 0.9 * conditioning().R.value; };
  auto D_hat = [&]() { return flags.D ? *flags.D : conditioning().D.value; };
  auto L_hat = [&]() {
    if (flags.L) return *flags.L;
    const std::optional<double>& L = conditioning().L;
    if (!L) throw ConfigError("no smoothness estimate; pass --L");
    return *L;
  };

  SolveTrace trace;
  if (method == "subgradient") {
    SolveOptions so;
    so.max_iters = flags.max_iters;
    so.stop_tol = flags.stop_tol;
    so.record_every = flags.record_every;
    so.lipschitz_dual = flags.lipschitz_dual;
    if (!so.lipschitz_dual && flags.policy == "nonconvex" &&
        flags.stop_tol > 0.0) {
      so.lipschitz_dual = 1.0 / R_hat();
    }
    trace = radial_subgradient(lp.prob, lp.x0, make_policy(flags, lp), so);
  } else if (method == "smoothing") {
    SmoothingOptions so;
    if (flags.eta) {
      so.eta = *flags.eta;
    } else {
      const double terms =
          static_cast<double>(lp.prob.pieces.size() +
                              static_cast<std::size_t>(lp.prob.gauge.rows()));
      if (terms < 2.0) throw ConfigError("pass --eta for single-term duals");
      so.eta = flags.eps / (2.0 * std::log(terms));
    }
    so.L_eta = flags.L_eta;
    if (!so.L_eta) {
      so.L = L_hat();
      so.D = D_hat();
      so.R = R_hat();
    }
    so.squared_row_norms = flags.row_norms != "linear";
    so.momentum_clip = flags.momentum_clip;
    so.max_iters = flags.max_iters;
    so.stop_tol = flags.stop_tol;
    so.record_every = flags.record_every;
    trace = radial_smoothing(lp.prob, lp.x0, so);
  } else if (method == "accelerated") {
    AcceleratedOptions ao;
    if (flags.step_smoothness) {
      ao.step_smoothness = flags.step_smoothness;
      ao.L = ao.D = ao.R = 1.0;  // unused under the override
    } else {
      ao.L = L_hat();
      ao.D = D_hat();
      ao.R = R_hat();
    }
    ao.momentum_clip = flags.momentum_clip;
    ao.max_iters = flags.max_iters;
    ao.stop_tol = flags.stop_tol;
    ao.record_every = flags.record_every;
    trace = radial_accelerated(lp.prob, lp.x0, ao);
  } else if (method == "projected" || method == "accelerated-projected" ||
             method == "frank-wolfe") {
    if (!lp.qp) throw ConfigError("baseline methods need a qp problem");
    BaselineOptions bo;
    bo.max_iters = flags.max_iters;
    bo.stop_tol = flags.stop_tol;
    bo.record_every = flags.record_every;
    if (lp.prob.p_star) bo.p_star = lp.prob.p_star;
    const SmoothFunction raw = qp_smooth_function(*lp.qp);
    if (method == "frank-wolfe") {
      const auto box = detect_box(lp.qp->gauge(), lp.qp->dim());
      if (!box) throw ConfigError("frank-wolfe needs a box feasible set");
      const QpInstance& inst = *lp.qp;
      auto curvature = [inst](const Vector& d) {
        return inst.lambda * inst.quad_form(d);
      };
      trace = frank_wolfe(raw, curvature, box_lmo(box->first, box->second),
                          lp.x0, bo);
    } else if (method == "projected") {
      trace = projected_gradient(raw, lp.qp->gauge(), lp.x0, L_hat(), bo);
    } else {
      trace = accelerated_projected_gradient(raw, lp.qp->gauge(), lp.x0,
                                             L_hat(), bo);
    }
  } else {
    throw ConfigError("unknown method: " + flags.method);
  }

  if (!flags.trace_path.empty()) write_trace_csv(trace, flags.trace_path);
  out << "solve: method=" << method << " status=" << to_string(trace.status)
      << " iterations=" << trace.iterations
      << " primal=" << fmt6(trace.primal_value)
      << " best_primal=" << fmt6(trace.best_primal);
  if (lp.prob.p_star) out << " best_rel_gap=" << fmt6(trace.best_rel_gap);
  out << "\n";
  if (trace.certificate) {
    out << "unboundedness certificate: dual ray with value 0\n";
  }
  return trace.status == SolveStatus::projection_failure ? 1 : 0;
}

inline int run_bench(const std::string& config_path,
                     std::optional<std::uint64_t> seed,
                     const std::string& out_dir_flag, std::ostream& out) {
  BenchConfig cfg;
  if (!config_path.empty()) {
    cfg = load_bench_config(config_path, seed);
  } else {
    cfg.instances.front().seed = resolve_seed(seed, std::nullopt);
  }
  if (!out_dir_flag.empty()) cfg.out_dir = out_dir_flag;
  const BenchReport report = run_benchmark(cfg);
  for (const InstanceReport& ir : report.instances) {
    out << "bench " << ir.label << ": p_star=" << fmt6(ir.p_star)
        << " d_star=" << fmt6(ir.d_star)
        << " R=" << fmt6(ir.conditioning.R.value)
        << " D=" << fmt6(ir.conditioning.D.value) << "\n";
  }
  for (const BenchRow& row : report.rows) {
    out << "  " << row.instance << " " << row.method << ":";
    if (!row.error.empty()) {
      out << " error=" << row.error << "\n";
      continue;
    }
    out << " status=" << to_string(row.status)
        << " iterations=" << row.iterations
        << " best_primal=" << fmt6(row.best_primal)
        << " best_rel_gap=" << fmt6(row.best_rel_gap)
        << " elapsed=" << fmt6(row.elapsed_seconds) << "s";
    if (row.projection_sweeps > 0) {
      out << " projection_sweeps=" << row.projection_sweeps;
    }
    out << "\n";
  }
  if (!cfg.out_dir.empty()) {
    std::ofstream os(cfg.out_dir + "/summary.csv");
    if (!os) throw ConfigError("cannot write summary in " + cfg.out_dir);
    write_bench_csv(report, os);
  }
  return 0;
}

}  // namespace detail

// Entry point shared by the binary and the tests. Exit codes: 0 success,
// 1 semantic failure (check found violations, a projection failed), 2 bad
// usage or configuration.
inline int run_cli(const std::vector<std::string>& args, std::ostream& out,
                   std::ostream& err) {
  CLI::App app{"projection-free maximization via radial transforms", "radial"};
  app.require_subcommand(1);

  // check
  auto* check = app.add_subcommand(
      "check", "verify strict upper radiality on a sampled grid");
  std::string check_file;
  std::optional<std::uint64_t> check_seed;
  int check_dirs = 64;
  double grid_lo = 1e-3, grid_hi = 1e3, eps_mono = 1e-9;
  int grid_count = 61;
  check->add_option("problem", check_file, "problem file (json)")->required();
  check->add_option("--seed", check_seed, "override the instance seed");
  check->add_option("--directions", check_dirs,
                    "random probe directions beyond the signed axes");
  check->add_option("--grid-lo", grid_lo, "smallest probe scale");
  check->add_option("--grid-hi", grid_hi, "largest probe scale");
  check->add_option("--grid-count", grid_count, "probe scales per direction");
  check->add_option("--eps-mono", eps_mono, "monotonicity slack");

  // certify
  auto* certify = app.add_subcommand(
      "certify", "estimate conditioning of the problem and its dual");
  std::string certify_file;
  std::optional<std::uint64_t> certify_seed;
  certify->add_option("problem", certify_file, "problem file (json)")
      ->required();
  certify->add_option("--seed", certify_seed, "override the instance seed");

  // solve
  auto* solve = app.add_subcommand("solve", "run a solver on a problem file");
  detail::SolveFlags flags;
  solve->add_option("problem", flags.file, "problem file (json)")->required();
  solve->add_option("--seed", flags.seed, "override the instance seed");
  solve
      ->add_option("--method", flags.method,
                   "subgradient|smoothing|accelerated|projected|"
                   "accelerated-projected|frank-wolfe")
      ->capture_default_str();
  solve
      ->add_option("--policy", flags.policy,
                   "subgradient stepsize: polyak|relative|nonconvex|constant")
      ->capture_default_str();
  solve->add_option("--eps", flags.eps, "accuracy target for stepsizes and eta")
      ->capture_default_str();
  solve->add_option("--alpha", flags.alpha, "constant stepsize");
  solve->add_option("--dstar", flags.d_star, "optimal dual value for polyak");
  solve->add_option("--eta", flags.eta, "smoothing parameter");
  solve->add_option("--L-eta", flags.L_eta, "smoothed gradient constant");
  solve->add_option("--L", flags.L, "objective smoothness override");
  solve->add_option("--D", flags.D, "domain diameter override");
  solve->add_option("--R", flags.R, "zero-set radius override");
  solve->add_option("--step-smoothness", flags.step_smoothness,
                    "dual smoothness override for accelerated steps");
  solve->add_option("--lipschitz-dual", flags.lipschitz_dual,
                    "dual Lipschitz constant for the stationarity stop");
  solve->add_flag("--momentum-clip", flags.momentum_clip,
                  "floor the momentum coefficient at zero");
  solve
      ->add_option("--row-norms", flags.row_norms,
                   "constraint row norms in L_eta: squared|linear")
      ->capture_default_str();
  solve->add_option("--max-iters", flags.max_iters, "iteration budget")
      ->capture_default_str();
  solve->add_option("--stop-tol", flags.stop_tol,
                    "relative gap or stationarity tolerance");
  solve->add_option("--record-every", flags.record_every,
                    "trace every k-th iteration");
  solve->add_option("--trace", flags.trace_path, "write the iteration trace CSV");

  // bench
  auto* bench = app.add_subcommand(
      "bench", "compare radial solvers against projection baselines");
  std::string bench_config, bench_out;
  std::optional<std::uint64_t> bench_seed;
  bench->add_option("--config", bench_config, "bench config file (json)");
  bench->add_option("--seed", bench_seed, "override the instance seed");
  bench->add_option("--out", bench_out, "directory for trace and summary CSVs");

  std::vector<std::string> argv_store;
  argv_store.reserve(args.size() + 1);
  argv_store.push_back("radial");
  argv_store.insert(argv_store.end(), args.begin(), args.end());
  std::vector<const char*> argv;
  argv.reserve(argv_store.size());
  for (const std::string& a : argv_store) argv.push_back(a.c_str());

  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? 0 : 2;
  }

  try {
    if (check->parsed()) {
      return detail::run_check(check_file, check_seed, check_dirs, grid_lo,
                               grid_hi, grid_count, eps_mono, out);
    }
    if (certify->parsed()) {
      return detail::run_certify(certify_file, certify_seed, out);
    }
    if (solve->parsed()) return detail::run_solve(flags, out);
    return detail::run_bench(bench_config, bench_seed, bench_out, out);
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  }
}

}  // namespace radial
