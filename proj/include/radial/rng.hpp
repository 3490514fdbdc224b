// radial: projection-free first-order methods for nonnegative maximization.
// Licensed under the Apache License, Version 2.0.
#pragma once

#include <Eigen/Core>
#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

namespace radial {

// Deterministic Gaussian stream: mt19937_64 mapped through a fixed Box-Muller
// transform. std::normal_distribution is implementation-defined, so traces
// seeded the same way could differ across standard libraries; this generator
// pins the algorithm so a seed fully determines every instance and trace.
class GaussianSampler {
 public:
  explicit GaussianSampler(std::uint64_t seed) : engine_(seed) {}

  // One standard normal draw. Consumes two engine words per pair of draws.
  double operator()() {
    if (have_spare_) {
      have_spare_ = false;
      return spare_;
    }
    // u1 in (0, 1] so the log is finite; u2 in [0, 1).
    const double u1 = (static_cast<double>(engine_() >> 11) + 1.0) * 0x1.0p-53;
    const double u2 = static_cast<double>(engine_() >> 11) * 0x1.0p-53;
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double a = 2.0 * M_PI * u2;
    spare_ = r * std::sin(a);
    have_spare_ = true;
    return r * std::cos(a);
  }

  Eigen::VectorXd vector(Eigen::Index n) {
    Eigen::VectorXd out(n);
    for (Eigen::Index i = 0; i < n; ++i) out[i] = (*this)();
    return out;
  }

  Eigen::MatrixXd matrix(Eigen::Index rows, Eigen::Index cols) {
    // Row-major fill order is part of the determinism contract.
    Eigen::MatrixXd out(rows, cols);
    for (Eigen::Index i = 0; i < rows; ++i) {
      for (Eigen::Index j = 0; j < cols; ++j) out(i, j) = (*this)();
    }
    return out;
  }

  std::mt19937_64& engine() { return engine_; }

 private:
  std::mt19937_64 engine_;
  double spare_ = 0.0;
  bool have_spare_ = false;
};

// Probe directions for sampling-based checks: the 2n signed axes followed by
// `n_random` seeded unit vectors.
inline std::vector<Eigen::VectorXd> direction_set(Eigen::Index dim,
                                                  int n_random = 512,
                                                  std::uint64_t seed = 0) {
  std::vector<Eigen::VectorXd> dirs;
  dirs.reserve(static_cast<std::size_t>(2 * dim + n_random));
  for (Eigen::Index i = 0; i < dim; ++i) {
    Eigen::VectorXd e = Eigen::VectorXd::Zero(dim);
    e[i] = 1.0;
    dirs.push_back(e);
    dirs.push_back(-e);
  }
  GaussianSampler gauss(seed);
  for (int k = 0; k < n_random; ++k) {
    Eigen::VectorXd g = gauss.vector(dim);
    double norm = g.norm();
    while (norm < 1e-12) {  // astronomically unlikely, but keep it total
      g = gauss.vector(dim);
      norm = g.norm();
    }
    dirs.push_back(g / norm);
  }
  return dirs;
}

}  // namespace radial
