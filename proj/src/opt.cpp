#include "mpctune/opt.hpp"

#include <cmath>
#include <deque>
#include <limits>

#include "mpctune/errors.hpp"

namespace mpctune {

namespace {

Eigen::VectorXd clamp_box(const Eigen::VectorXd& x, const Eigen::VectorXd& lo,
                          const Eigen::VectorXd& hi) {
  return x.cwiseMax(lo).cwiseMin(hi);
}

Eigen::VectorXd num_gradient(const ObjectiveFn& f, const Eigen::VectorXd& x,
                             const Eigen::VectorXd& lo, const Eigen::VectorXd& hi) {
  const int d = static_cast<int>(x.size());
  Eigen::VectorXd g(d);
  Eigen::VectorXd xp = x;
  for (int i = 0; i < d; ++i) {
    const double h = std::max(1e-8, 1e-6 * (hi[i] - lo[i]));
    const double saved = xp[i];
    xp[i] = saved + h;
    const double fp = f(xp);
    xp[i] = saved - h;
    const double fm = f(xp);
    xp[i] = saved;
    g[i] = (fp - fm) / (2.0 * h);
  }
  return g;
}

}  // namespace

OptResult minimize_bounded(const ObjectiveFn& f, const Eigen::VectorXd& x0,
                           const Eigen::VectorXd& lower, const Eigen::VectorXd& upper,
                           int max_iterations) {
  if (x0.size() != lower.size() || x0.size() != upper.size()) {
    throw ConfigError("minimize_bounded: dimension mismatch");
  }
  constexpr double kGradTol = 1e-8;
  constexpr double kArmijo = 1e-4;
  constexpr int kHistory = 8;
  constexpr int kMaxBacktracks = 40;

  OptResult res;
  res.x = clamp_box(x0, lower, upper);
  res.f = f(res.x);
  if (!std::isfinite(res.f)) return res;

  std::deque<std::pair<Eigen::VectorXd, Eigen::VectorXd>> history;  // (s, y)
  Eigen::VectorXd g = num_gradient(f, res.x, lower, upper);

  for (int iter = 0; iter < max_iterations; ++iter) {
    res.iterations = iter + 1;

    // Projected-gradient stationarity test.
    const Eigen::VectorXd pg = res.x - clamp_box(res.x - g, lower, upper);
    if (pg.lpNorm<Eigen::Infinity>() < kGradTol) {
      res.converged = true;
      break;
    }

    // Two-loop recursion for the quasi-Newton direction.
    Eigen::VectorXd q = g;
    std::vector<double> alpha(history.size());
    for (int i = static_cast<int>(history.size()) - 1; i >= 0; --i) {
      const auto& [s, y] = history[static_cast<std::size_t>(i)];
      const double rho = 1.0 / y.dot(s);
      alpha[static_cast<std::size_t>(i)] = rho * s.dot(q);
      q -= alpha[static_cast<std::size_t>(i)] * y;
    }
    if (!history.empty()) {
      const auto& [s, y] = history.back();
      q *= s.dot(y) / y.dot(y);
    }
    for (std::size_t i = 0; i < history.size(); ++i) {
      const auto& [s, y] = history[i];
      const double rho = 1.0 / y.dot(s);
      const double beta = rho * y.dot(q);
      q += (alpha[i] - beta) * s;
    }
    Eigen::VectorXd dir = -q;
    if (dir.dot(g) > -1e-14 * dir.norm() * g.norm()) dir = -g;  // enforce descent

    double step = history.empty() ? std::min(1.0, 1.0 / std::max(1e-12, g.norm())) : 1.0;
    Eigen::VectorXd x_new;
    double f_new = std::numeric_limits<double>::infinity();
    bool accepted = false;
    for (int bt = 0; bt < kMaxBacktracks; ++bt) {
      x_new = clamp_box(res.x + step * dir, lower, upper);
      const Eigen::VectorXd dx = x_new - res.x;
      if (dx.lpNorm<Eigen::Infinity>() < 1e-15) break;
      f_new = f(x_new);
      if (std::isfinite(f_new) && f_new <= res.f + kArmijo * g.dot(dx)) {
        accepted = true;
        break;
      }
      step *= 0.5;
    }
    if (!accepted) {
      res.converged = true;  // no further progress along this direction
      break;
    }

    Eigen::VectorXd g_new = num_gradient(f, x_new, lower, upper);
    const Eigen::VectorXd s_vec = x_new - res.x;
    const Eigen::VectorXd y_vec = g_new - g;
    if (s_vec.dot(y_vec) > 1e-12) {
      history.emplace_back(s_vec, y_vec);
      if (static_cast<int>(history.size()) > kHistory) history.pop_front();
    }
    res.x = std::move(x_new);
    res.f = f_new;
    g = std::move(g_new);
  }
  return res;
}

}  // namespace mpctune
