// radial: projection-free first-order methods for nonnegative maximization.
// Licensed under the Apache License, Version 2.0.
#pragma once

#include <Eigen/Core>
#include <sstream>
#include <stdexcept>
#include <string>

namespace radial {

// Bad caller input: nonpositive perspective scale, empty sample cloud, a step
// policy missing its required parameter, and similar misconfigurations.
class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// The perspective transform of an objective was observed to decrease along
// increasing scales, so the objective is not upper radial and the dual is
// meaningless. Carries the witnessing direction and scale pair.
class RadialityViolation : public std::runtime_error {
 public:
  RadialityViolation(Eigen::VectorXd y, double v1, double v2, double fp1,
                     double fp2)
      : std::runtime_error(describe(y, v1, v2, fp1, fp2)),
        y_(std::move(y)), v1_(v1), v2_(v2), fp1_(fp1), fp2_(fp2) {}

  const Eigen::VectorXd& y() const { return y_; }
  double v1() const { return v1_; }
  double v2() const { return v2_; }
  double perspective_at_v1() const { return fp1_; }
  double perspective_at_v2() const { return fp2_; }

 private:
  static std::string describe(const Eigen::VectorXd& y, double v1, double v2,
                              double fp1, double fp2) {
    std::ostringstream os;
    os << "perspective not nondecreasing: f^p(y," << v1 << ") = " << fp1
       << " > f^p(y," << v2 << ") = " << fp2 << " at y = [";
    for (Eigen::Index i = 0; i < y.size(); ++i) {
      os << (i ? ", " : "") << y[i];
    }
    os << "]";
    return os.str();
  }

  Eigen::VectorXd y_;
  double v1_, v2_;
  double fp1_, fp2_;
};

// A derivative formula hit a (near-)singular denominator, typically because
// the objective is only weakly radial at the queried point.
class SingularityError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace radial
