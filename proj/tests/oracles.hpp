#pragma once

// Test-only reference implementations, kept independent of the library's
// numerical paths: plain Gauss-Jordan inverse, LU log-determinant, direct
// softmax, and a fine-step Euler integrator.

#include <Eigen/Dense>
#include <cmath>
#include <stdexcept>
#include <vector>

#include "mpctune/env.hpp"

namespace oracles {

// Gauss-Jordan with partial pivoting; no Eigen decompositions involved.
inline Eigen::MatrixXd dense_inverse(Eigen::MatrixXd a) {
  const int n = static_cast<int>(a.rows());
  Eigen::MatrixXd inv = Eigen::MatrixXd::Identity(n, n);
  for (int col = 0; col < n; ++col) {
    int pivot = col;
    for (int r = col + 1; r < n; ++r) {
      if (std::abs(a(r, col)) > std::abs(a(pivot, col))) pivot = r;
    }
    if (a(pivot, col) == 0.0) throw std::runtime_error("singular matrix");
    a.row(col).swap(a.row(pivot));
    inv.row(col).swap(inv.row(pivot));
    const double p = a(col, col);
    a.row(col) /= p;
    inv.row(col) /= p;
    for (int r = 0; r < n; ++r) {
      if (r == col) continue;
      const double f = a(r, col);
      a.row(r) -= f * a.row(col);
      inv.row(r) -= f * inv.row(col);
    }
  }
  return inv;
}

// log|A| for symmetric positive definite A via Doolittle LU (no pivoting
// needed for SPD, but kept with partial pivoting and sign tracking).
inline double dense_log_det(Eigen::MatrixXd a) {
  const int n = static_cast<int>(a.rows());
  double log_det = 0.0;
  for (int col = 0; col < n; ++col) {
    int pivot = col;
    for (int r = col + 1; r < n; ++r) {
      if (std::abs(a(r, col)) > std::abs(a(pivot, col))) pivot = r;
    }
    if (a(pivot, col) == 0.0) throw std::runtime_error("singular matrix");
    a.row(col).swap(a.row(pivot));
    log_det += std::log(std::abs(a(col, col)));
    for (int r = col + 1; r < n; ++r) {
      const double f = a(r, col) / a(col, col);
      a.row(r) -= f * a.row(col);
    }
  }
  return log_det;
}

// Squared-exponential kernel recomputed from scratch.
inline double kernel_direct(const Eigen::VectorXd& a, const Eigen::VectorXd& b,
                            double signal_var, const Eigen::VectorXd& ls) {
  double q = 0.0;
  for (int i = 0; i < a.size(); ++i) {
    const double d = (a[i] - b[i]) / ls[i];
    q += d * d;
  }
  return signal_var * std::exp(-0.5 * q);
}

inline Eigen::MatrixXd kernel_matrix_direct(const Eigen::MatrixXd& x, double signal_var,
                                            const Eigen::VectorXd& ls) {
  Eigen::MatrixXd k(x.rows(), x.rows());
  for (int i = 0; i < x.rows(); ++i) {
    for (int j = 0; j < x.rows(); ++j) {
      k(i, j) = kernel_direct(x.row(i), x.row(j), signal_var, ls);
    }
  }
  return k;
}

// Direct softmax of the MPPI exponents in long double.
inline std::vector<double> mppi_weights_direct(const std::vector<double>& costs,
                                               const std::vector<std::vector<double>>& eps,
                                               const std::vector<double>& plan, double lambda,
                                               double sigma_eps) {
  const std::size_t m = costs.size();
  std::vector<long double> ex(m);
  for (std::size_t j = 0; j < m; ++j) {
    long double control = 0.0L;
    for (std::size_t i = 0; i < plan.size(); ++i) {
      control += static_cast<long double>(plan[i]) * (plan[i] + eps[j][i]);
    }
    ex[j] = -(static_cast<long double>(costs[j]) +
              static_cast<long double>(lambda) / (sigma_eps * sigma_eps) * control) /
            lambda;
  }
  long double mx = ex[0];
  for (auto e : ex) mx = std::max(mx, e);
  long double z = 0.0L;
  std::vector<double> w(m);
  for (std::size_t j = 0; j < m; ++j) z += std::exp(ex[j] - mx);
  for (std::size_t j = 0; j < m; ++j) {
    w[j] = static_cast<double>(std::exp(ex[j] - mx) / z);
  }
  return w;
}

// Euler integration of the same equations of motion with tiny sub-steps;
// validates the RK4 integrator.
inline mpctune::State fine_euler(const mpctune::Task& task, mpctune::State s, double action,
                                 const mpctune::PhysicalParams& p, double dt, double sub_dt) {
  const int steps = static_cast<int>(std::llround(dt / sub_dt));
  for (int k = 0; k < steps; ++k) {
    const mpctune::State d = mpctune::detail::deriv(task, s, action, p);
    for (int i = 0; i < s.n; ++i) s[i] += sub_dt * d[i];
  }
  return s;
}

}  // namespace oracles
