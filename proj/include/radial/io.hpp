// radial: projection-free first-order methods for nonnegative maximization.
// Licensed under the Apache License, Version 2.0.
#pragma once

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "radial/bench.hpp"

namespace radial {

using nlohmann::json;

// Seed precedence: command line beats the RADIAL_SEED environment variable,
// which beats the problem file, which defaults to 1.
inline std::uint64_t resolve_seed(std::optional<std::uint64_t> cli_seed,
                                  std::optional<std::uint64_t> file_seed) {
  if (cli_seed) return *cli_seed;
  if (const char* env = std::getenv("RADIAL_SEED")) {
    char* end = nullptr;
    const unsigned long long v = std::strtoull(env, &end, 10);
    if (end == env || *end != '\0') {
      throw ConfigError("RADIAL_SEED is not an unsigned integer");
    }
    return static_cast<std::uint64_t>(v);
  }
  if (file_seed) return *file_seed;
  return 1;
}

inline json load_json_file(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw ConfigError("cannot open file: " + path);
  try {
    return json::parse(is);
  } catch (const json::exception& e) {
    throw ConfigError(path + ": " + e.what());
  }
}

namespace detail {

inline Vector vector_from_json(const json& j, const std::string& what) {
  if (!j.is_array()) throw ConfigError(what + " must be an array of numbers");
  Vector v(j.size());
  for (std::size_t i = 0; i < j.size(); ++i) {
    if (!j[i].is_number()) throw ConfigError(what + " must be numeric");
    v[static_cast<Eigen::Index>(i)] = j[i].get<double>();
  }
  return v;
}

inline Matrix matrix_from_json(const json& j, const std::string& what) {
  if (!j.is_array() || j.empty() || !j[0].is_array()) {
    throw ConfigError(what + " must be an array of rows");
  }
  const std::size_t cols = j[0].size();
  Matrix m(j.size(), cols);
  for (std::size_t i = 0; i < j.size(); ++i) {
    if (!j[i].is_array() || j[i].size() != cols) {
      throw ConfigError(what + " rows must all have the same length");
    }
    for (std::size_t k = 0; k < cols; ++k) {
      m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(k)) =
          j[i][k].get<double>();
    }
  }
  return m;
}

inline Matrix read_matrix_csv(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw ConfigError("cannot open matrix file: " + path);
  std::vector<std::vector<double>> rows;
  std::string line;
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    std::vector<double> row;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) {
      try {
        row.push_back(std::stod(cell));
      } catch (const std::exception&) {
        throw ConfigError(path + ": non-numeric cell '" + cell + "'");
      }
    }
    if (!rows.empty() && row.size() != rows.front().size()) {
      throw ConfigError(path + ": ragged rows");
    }
    rows.push_back(std::move(row));
  }
  if (rows.empty()) throw ConfigError(path + ": empty matrix");
  Matrix m(rows.size(), rows.front().size());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    for (std::size_t k = 0; k < rows[i].size(); ++k) {
      m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(k)) = rows[i][k];
    }
  }
  return m;
}

// A matrix field is either inline ("A": [[...]]) or a CSV reference
// ("A_csv": "path") resolved against the problem file's directory.
inline std::optional<Matrix> matrix_field(const json& j,
                                          const std::string& dir,
                                          const std::string& name) {
  if (j.contains(name)) return matrix_from_json(j.at(name), name);
  const std::string ref = name + "_csv";
  if (j.contains(ref)) {
    const std::filesystem::path p =
        std::filesystem::path(dir) / j.at(ref).get<std::string>();
    return read_matrix_csv(p.string());
  }
  return std::nullopt;
}

inline SmoothFunction shift_smooth(const SmoothFunction& f,
                                   const Vector& anchor, double level) {
  SmoothFunction g;
  g.dim = f.dim;
  g.value = [f, anchor, level](const Vector& x) {
    return f.value(x + anchor) - level;
  };
  if (f.gradient) {
    g.gradient = [f, anchor](const Vector& x) { return f.gradient(x + anchor); };
  }
  if (f.hessian) {
    g.hessian = [f, anchor](const Vector& x) { return f.hessian(x + anchor); };
  }
  g.is_concave = f.is_concave;
  return g;
}

}  // namespace detail

// A problem file plus everything a solver run needs around it.
struct LoadedProblem {
  RadialProblem prob;
  std::optional<QpInstance> qp;  // set for qp files, enables baselines
  Vector x0;
  std::string type;
  std::uint64_t seed = 1;
};

namespace detail {

inline LoadedProblem load_qp_problem(const json& j, const std::string& dir,
                                     std::uint64_t seed) {
  LoadedProblem out;
  out.type = "qp";
  out.seed = seed;
  QpInstance inst;
  if (j.contains("c") || j.contains("c_csv")) {
    // Explicit instance.
    if (j.contains("c")) {
      inst.c = vector_from_json(j.at("c"), "c");
    } else {
      const Matrix cm = read_matrix_csv(
          (std::filesystem::path(dir) / j.at("c_csv").get<std::string>())
              .string());
      inst.c = cm.cols() == 1 ? cm.col(0) : Vector(cm.row(0).transpose());
    }
    if (const auto P = matrix_field(j, dir, "P")) inst.P = *P;
    if (const auto Q = matrix_field(j, dir, "Q")) inst.Qdense = *Q;
    if (const auto A = matrix_field(j, dir, "A")) inst.A = *A;
    if (j.contains("b")) inst.b = vector_from_json(j.at("b"), "b");
    inst.lambda = j.value("lambda", 1.0);
    inst.validate();
  } else {
    QpGenConfig cfg;
    cfg.n = j.value("n", 50);
    cfg.m = j.value("m", 200);
    cfg.r = j.value("r", 20);
    cfg.lambda = j.value("lambda", 1.0);
    cfg.box = j.value("box", false);
    cfg.seed = seed;
    inst = generate_qp(cfg);
  }
  out.prob = from_qp(inst);
  out.qp = std::move(inst);
  out.x0 = Vector::Zero(out.prob.dim());
  return out;
}

inline LoadedProblem load_poisson_problem(const json& j, const std::string& dir,
                                          std::uint64_t seed) {
  LoadedProblem out;
  out.type = "poisson";
  out.seed = seed;
  const auto A = matrix_field(j, dir, "A");
  if (!A || !j.contains("counts")) {
    throw ConfigError("poisson problems need A and counts");
  }
  const Vector counts = vector_from_json(j.at("counts"), "counts");
  const SmoothFunction loglik = poisson_loglik(*A, counts);
  Vector anchor = Vector::Zero(A->cols());
  if (j.contains("anchor")) anchor = vector_from_json(j.at("anchor"), "anchor");
  const double level = j.value("level", 0.0);

  if (j.contains("rescale")) {
    // (1 + lambda f)_+ form with lambda picked from a deterministic sample
    // cloud around the start point.
    const json& rj = j.at("rescale");
    const double radius = rj.value("radius", 1.0);
    const int count = rj.value("count", 32);
    if (!(radius > 0.0) || count <= 0) {
      throw ConfigError("rescale needs radius > 0 and count > 0");
    }
    Vector x0 = Vector::Zero(A->cols());
    if (j.contains("x0")) x0 = vector_from_json(j.at("x0"), "x0");
    const SmoothFunction shifted = shift_smooth(loglik, anchor, level);
    GaussianSampler gs(seed);
    std::vector<Vector> cloud;
    cloud.push_back(x0);
    while (static_cast<int>(cloud.size()) < count) {
      const Vector probe = x0 + radius * gs.vector(A->cols());
      if (std::isfinite(shifted.value(probe))) cloud.push_back(probe);
    }
    const RescaleResult rescaled = lambda_rescale(shifted, cloud);
    out.prob = from_primal(rescaled.objective);
  } else {
    out.prob = from_primal(translate_truncate(loglik, anchor, level));
  }
  out.x0 = Vector::Zero(out.prob.dim());
  return out;
}

inline RadialPiece composite_piece_from_json(const json& pj) {
  const std::string kind = pj.value("kind", "");
  if (kind == "sqrt_ball") return sqrt_ball_piece(pj.at("n").get<Eigen::Index>());
  if (kind == "sqrt_quadratic") {
    return sqrt_quadratic_piece(matrix_from_json(pj.at("Q"), "Q"));
  }
  if (kind == "norm_cap") return norm_cap_piece(pj.at("n").get<Eigen::Index>());
  if (kind == "norm_power") {
    return piece_from_primal(norm_power_objective(pj.at("n").get<Eigen::Index>(),
                                                  pj.at("p").get<double>()));
  }
  throw ConfigError("unknown composite piece kind: " + kind);
}

inline LoadedProblem load_composite_problem(const json& j,
                                            const std::string& dir,
                                            std::uint64_t seed) {
  LoadedProblem out;
  out.type = "composite";
  out.seed = seed;
  if (!j.contains("pieces") || !j.at("pieces").is_array() ||
      j.at("pieces").empty()) {
    throw ConfigError("composite problems need a pieces array");
  }
  std::vector<RadialPiece> pieces;
  for (const json& pj : j.at("pieces")) {
    pieces.push_back(composite_piece_from_json(pj));
  }
  const CompositeObjective comp = min_compose(pieces);
  RadialProblem prob;
  prob.pieces = comp.pieces;
  if (const auto A = matrix_field(j, dir, "A")) {
    if (!j.contains("b")) throw ConfigError("composite gauge needs b with A");
    prob.gauge.A = *A;
    prob.gauge.b = vector_from_json(j.at("b"), "b");
    prob.gauge.validate(comp.dim());
  }
  // The solver-facing primal: min over pieces, zero outside the polytope.
  const PrimalObjective bare = comp.primal();
  const PolyhedralGauge gauge = prob.gauge;
  prob.primal.dim = bare.dim;
  prob.primal.eval = [bare, gauge](const Vector& x) {
    if (gauge.rows() > 0 && !gauge.feasible(x)) return ExtReal::zero();
    return bare.eval(x);
  };
  prob.primal.supgradient = bare.supgradient;
  prob.primal.is_concave = bare.is_concave;
  out.prob = std::move(prob);
  out.x0 = Vector::Zero(out.prob.dim());
  return out;
}

}  // namespace detail

inline LoadedProblem load_problem(const std::string& path,
                                  std::optional<std::uint64_t> cli_seed = {}) {
  const json j = load_json_file(path);
  const std::string dir = std::filesystem::path(path).parent_path().string();
  std::optional<std::uint64_t> file_seed;
  if (j.contains("seed")) file_seed = j.at("seed").get<std::uint64_t>();
  const std::uint64_t seed = resolve_seed(cli_seed, file_seed);

  const std::string type = j.value("type", "");
  LoadedProblem out;
  if (type == "qp") {
    out = detail::load_qp_problem(j, dir, seed);
  } else if (type == "poisson") {
    out = detail::load_poisson_problem(j, dir, seed);
  } else if (type == "composite") {
    out = detail::load_composite_problem(j, dir, seed);
  } else {
    throw ConfigError("unknown problem type: '" + type + "'");
  }
  if (j.contains("x0")) {
    out.x0 = detail::vector_from_json(j.at("x0"), "x0");
    if (out.x0.size() != out.prob.dim()) {
      throw ConfigError("x0 has the wrong dimension");
    }
  }
  if (j.contains("p_star")) out.prob.p_star = j.at("p_star").get<double>();
  return out;
}

inline BenchMethod bench_method_from_string(const std::string& s) {
  if (s == "radial_subgradient" || s == "subgradient")
    return BenchMethod::radial_subgradient;
  if (s == "radial_smoothing" || s == "smoothing")
    return BenchMethod::radial_smoothing;
  if (s == "radial_accelerated" || s == "accelerated")
    return BenchMethod::radial_accelerated;
  if (s == "projected_gradient" || s == "projected")
    return BenchMethod::projected_gradient;
  if (s == "accelerated_gradient" || s == "accelerated_projected")
    return BenchMethod::accelerated_gradient;
  if (s == "frank_wolfe") return BenchMethod::frank_wolfe;
  throw ConfigError("unknown bench method: " + s);
}

namespace detail {

inline QpGenConfig qp_gen_from_json(const json& q,
                                    std::optional<std::uint64_t> cli_seed,
                                    std::optional<std::uint64_t> global_seed) {
  QpGenConfig gen;
  gen.n = q.value("n", gen.n);
  gen.m = q.value("m", gen.m);
  gen.r = q.value("r", gen.r);
  gen.lambda = q.value("lambda", gen.lambda);
  gen.box = q.value("box", gen.box);
  std::optional<std::uint64_t> file_seed = global_seed;
  if (q.contains("seed")) file_seed = q.at("seed").get<std::uint64_t>();
  gen.seed = resolve_seed(cli_seed, file_seed);
  return gen;
}

}  // namespace detail

inline BenchConfig load_bench_config(const std::string& path,
                                     std::optional<std::uint64_t> cli_seed = {}) {
  const json j = load_json_file(path);
  BenchConfig cfg;
  std::optional<std::uint64_t> global_seed;
  if (j.contains("seed")) global_seed = j.at("seed").get<std::uint64_t>();
  cfg.instances.clear();
  if (j.contains("instances")) {
    for (const json& q : j.at("instances")) {
      cfg.instances.push_back(detail::qp_gen_from_json(q, cli_seed, global_seed));
    }
  } else if (j.contains("qp")) {
    cfg.instances.push_back(
        detail::qp_gen_from_json(j.at("qp"), cli_seed, global_seed));
  } else {
    cfg.instances.push_back(
        detail::qp_gen_from_json(json::object(), cli_seed, global_seed));
  }
  if (j.contains("methods")) {
    for (const json& mj : j.at("methods")) {
      cfg.methods.push_back(bench_method_from_string(mj.get<std::string>()));
    }
  }
  cfg.max_iters = j.value("max_iters", cfg.max_iters);
  cfg.stop_tol = j.value("stop_tol", cfg.stop_tol);
  cfg.eps = j.value("eps", cfg.eps);
  cfg.record_every = j.value("record_every", cfg.record_every);
  cfg.out_dir = j.value("out_dir", cfg.out_dir);
  if (j.contains("reference")) {
    const json& r = j.at("reference");
    cfg.reference.eta_start = r.value("eta_start", cfg.reference.eta_start);
    cfg.reference.eta_end = r.value("eta_end", cfg.reference.eta_end);
    cfg.reference.stage_iters = r.value("stage_iters", cfg.reference.stage_iters);
    cfg.reference.max_total_iters =
        r.value("max_total_iters", cfg.reference.max_total_iters);
  }
  return cfg;
}

}  // namespace radial
