#pragma once

#include <Eigen/Dense>
#include <string>
#include <vector>

#include "mpctune/env.hpp"

namespace mpctune {

struct SpaceDim {
  std::string name;
  double lower = 0.0;
  double upper = 1.0;
};

// Ordered box bounds over x = {psi, phi}: per-parameter mean/std of each
// gamma-distributed dynamics parameter, then the controller's lambda and
// sigma_eps. BO and the baselines work on the [0,1]^d normalization of this
// box.
class SearchSpace {
 public:
  SearchSpace() = default;
  explicit SearchSpace(std::vector<SpaceDim> dims);

  int size() const { return static_cast<int>(dims_.size()); }
  const SpaceDim& dim(int i) const { return dims_[static_cast<std::size_t>(i)]; }
  const std::vector<SpaceDim>& dims() const { return dims_; }
  int index_of(const std::string& name) const;  // -1 when absent

  Eigen::VectorXd normalize(const Eigen::VectorXd& raw) const;
  Eigen::VectorXd denormalize(const Eigen::VectorXd& unit) const;
  Eigen::VectorXd clamp(const Eigen::VectorXd& raw) const;
  bool contains(const Eigen::VectorXd& raw, double tol = 1e-12) const;
  Eigen::VectorXd center() const;

  void set_bounds(const std::string& name, double lower, double upper);

  // Per-task defaults: dims mu_m, sigma_m, mu_l, sigma_l, lambda, sigma_eps.
  static SearchSpace for_task(TaskKind task);

 private:
  void validate() const;
  std::vector<SpaceDim> dims_;
};

}  // namespace mpctune
