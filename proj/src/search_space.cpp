#include "mpctune/search_space.hpp"

#include "mpctune/errors.hpp"

namespace mpctune {

SearchSpace::SearchSpace(std::vector<SpaceDim> dims) : dims_(std::move(dims)) { validate(); }

void SearchSpace::validate() const {
  for (const SpaceDim& d : dims_) {
    if (!(d.lower < d.upper)) {
      throw ConfigError("search_space." + d.name + ": lower must be < upper");
    }
    const bool positive_floor = d.name.rfind("sigma", 0) == 0 || d.name == "lambda";
    if (positive_floor && d.lower < 1e-5) {
      throw ConfigError("search_space." + d.name + ": lower bound must be >= 1e-5");
    }
  }
}

int SearchSpace::index_of(const std::string& name) const {
  for (int i = 0; i < size(); ++i) {
    if (dims_[static_cast<std::size_t>(i)].name == name) return i;
  }
  return -1;
}

Eigen::VectorXd SearchSpace::normalize(const Eigen::VectorXd& raw) const {
  if (raw.size() != size()) throw ConfigError("search_space: dimension mismatch");
  Eigen::VectorXd u(size());
  for (int i = 0; i < size(); ++i) {
    const SpaceDim& d = dim(i);
    u[i] = (raw[i] - d.lower) / (d.upper - d.lower);
  }
  return u;
}

Eigen::VectorXd SearchSpace::denormalize(const Eigen::VectorXd& unit) const {
  if (unit.size() != size()) throw ConfigError("search_space: dimension mismatch");
  Eigen::VectorXd raw(size());
  for (int i = 0; i < size(); ++i) {
    const SpaceDim& d = dim(i);
    raw[i] = d.lower + unit[i] * (d.upper - d.lower);
  }
  return raw;
}

Eigen::VectorXd SearchSpace::clamp(const Eigen::VectorXd& raw) const {
  Eigen::VectorXd out = raw;
  for (int i = 0; i < size(); ++i) {
    out[i] = std::min(std::max(out[i], dim(i).lower), dim(i).upper);
  }
  return out;
}

bool SearchSpace::contains(const Eigen::VectorXd& raw, double tol) const {
  if (raw.size() != size()) return false;
  for (int i = 0; i < size(); ++i) {
    if (raw[i] < dim(i).lower - tol || raw[i] > dim(i).upper + tol) return false;
  }
  return true;
}

Eigen::VectorXd SearchSpace::center() const {
  Eigen::VectorXd c(size());
  for (int i = 0; i < size(); ++i) c[i] = 0.5 * (dim(i).lower + dim(i).upper);
  return c;
}

void SearchSpace::set_bounds(const std::string& name, double lower, double upper) {
  const int i = index_of(name);
  if (i < 0) throw ConfigError("search_space: unknown dimension '" + name + "'");
  dims_[static_cast<std::size_t>(i)].lower = lower;
  dims_[static_cast<std::size_t>(i)].upper = upper;
  validate();
}

SearchSpace SearchSpace::for_task(TaskKind task) {
  std::vector<SpaceDim> dims;
  if (task == TaskKind::pendulum) {
    dims = {{"mu_m", 0.2, 2.0},    {"sigma_m", 1e-5, 0.1}, {"mu_l", 0.2, 2.0},
            {"sigma_l", 1e-5, 0.1}, {"lambda", 1e-5, 2.5},  {"sigma_eps", 1e-5, 4.0}};
  } else {
    dims = {{"mu_m", 0.1, 1.5},    {"sigma_m", 1e-5, 0.1}, {"mu_l", 0.2, 1.5},
            {"sigma_l", 1e-5, 0.1}, {"lambda", 1e-5, 2.5},  {"sigma_eps", 1e-5, 4.0}};
  }
  return SearchSpace(std::move(dims));
}

}  // namespace mpctune
