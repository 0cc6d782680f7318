#pragma once

#include <Eigen/Dense>
#include <functional>

namespace mpctune {

using ObjectiveFn = std::function<double(const Eigen::VectorXd&)>;

struct OptResult {
  Eigen::VectorXd x;
  double f = 0.0;
  int iterations = 0;
  bool converged = false;
};

// Box-constrained local minimization: L-BFGS direction with projection onto
// the box and Armijo backtracking; gradients by central differences. The
// objective must be evaluable in a small neighborhood outside the box (the
// finite-difference stencil can poke past an active bound).
OptResult minimize_bounded(const ObjectiveFn& f, const Eigen::VectorXd& x0,
                           const Eigen::VectorXd& lower, const Eigen::VectorXd& upper,
                           int max_iterations = 200);

}  // namespace mpctune
