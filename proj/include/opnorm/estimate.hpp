#pragma once

#include <Eigen/Dense>
#include <limits>
#include <vector>

namespace opnorm {

// Solver knobs shared by all iterative estimators. Restart i draws its
// starting point from seed + i, so parallel and serial runs agree.
struct EstimatorConfig {
  std::uint64_t seed = 42;
  int restarts = 16;
  int max_iter = 300;
  double tol = 1e-10;
};

// Certified bracket for a sup/inf quantity. `lower` is always attained by
// `witnesses` (coordinate vectors of the maximizing arguments); `upper` may
// be +inf when no structural bound applies.
struct NormEstimate {
  double lower = 0.0;
  double upper = std::numeric_limits<double>::infinity();
  std::vector<Eigen::VectorXcd> witnesses;
  std::vector<double> level_profile;
  int iterations = 0;
  bool converged = true;

  bool contains(double v, double tol = 1e-9) const {
    return lower - tol <= v && v <= upper + tol;
  }
};

}  // namespace opnorm
