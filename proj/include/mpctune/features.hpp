#pragma once

#include <Eigen/Dense>

namespace mpctune {

// Per-dimension monomials up to `degree` plus one bias term:
//   [1, x1, x1^2, ..., x1^deg, x2, ...]   (no cross terms)
// Length m = 1 + d * degree. Inputs are expected in [0,1]^d.
Eigen::VectorXd feature_map(const Eigen::VectorXd& x, int degree);
Eigen::MatrixXd feature_matrix(const Eigen::MatrixXd& X, int degree);
int feature_count(int dim, int degree);

// Generalized linear trend of the expected reward, g_hat(x) = alpha^T rho(x).
struct RewardTrendModel {
  Eigen::VectorXd alpha;
  int degree = 0;

  double predict(const Eigen::VectorXd& x) const;
};

// Ridge least squares of y on feature_map(X). The tiny default penalty keeps
// the solve defined when n < m.
RewardTrendModel fit_reward_trend(const Eigen::MatrixXd& X, const Eigen::VectorXd& y,
                                  int degree, double ridge = 1e-6);

// Parametric noise std sigma_nu(x) = z * exp(beta^T rho(x)) + zeta. zeta is a
// strictly positive floor (minimum homoscedastic noise).
struct NoiseModel {
  double z = 0.0;
  Eigen::VectorXd beta;  // bias entry kept at zero; z absorbs it
  double zeta = 1e-6;
  int degree = 0;
  bool constant_fallback = false;  // too few points, sigma_nu constant

  double sigma(const Eigen::VectorXd& x) const;
  Eigen::VectorXd sigma_at(const Eigen::MatrixXd& X) const;

  static NoiseModel constant(double sigma_nu, int dim_degree = 0);
};

// Two-stage residual fit: residuals r_i = |y_i - trend(x_i)|, zeta fixed at
// max(1e-6, 0.05 * median(r)), then log(max(r_i - zeta, 1e-8)) regressed on
// rho(x_i) by ridge least squares, the bias absorbing log z. Falls back to a
// constant model when n < m + 1.
NoiseModel fit_noise_model(const Eigen::MatrixXd& X, const Eigen::VectorXd& y,
                           const RewardTrendModel& trend, int degree);

// Ridge solution of ||A w - b||^2 + ridge ||w||^2 via SVD.
Eigen::VectorXd ridge_solve(const Eigen::MatrixXd& A, const Eigen::VectorXd& b, double ridge);

}  // namespace mpctune
