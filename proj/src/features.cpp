#include "mpctune/features.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include "mpctune/errors.hpp"

namespace mpctune {

int feature_count(int dim, int degree) { return 1 + dim * degree; }

Eigen::VectorXd feature_map(const Eigen::VectorXd& x, int degree) {
  if (degree < 1) throw ConfigError("feature_map: degree must be >= 1");
  const int d = static_cast<int>(x.size());
  Eigen::VectorXd rho(feature_count(d, degree));
  rho[0] = 1.0;
  int k = 1;
  for (int i = 0; i < d; ++i) {
    double p = 1.0;
    for (int j = 0; j < degree; ++j) {
      p *= x[i];
      rho[k++] = p;
    }
  }
  return rho;
}

Eigen::MatrixXd feature_matrix(const Eigen::MatrixXd& X, int degree) {
  Eigen::MatrixXd F(X.rows(), feature_count(static_cast<int>(X.cols()), degree));
  for (int i = 0; i < X.rows(); ++i) {
    F.row(i) = feature_map(X.row(i), degree).transpose();
  }
  return F;
}

Eigen::VectorXd ridge_solve(const Eigen::MatrixXd& A, const Eigen::VectorXd& b, double ridge) {
  if (ridge <= 0.0) ridge = 1e-12;  // rank deficiency guard, regularization forced on
  Eigen::BDCSVD<Eigen::MatrixXd> svd(A, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const Eigen::VectorXd& s = svd.singularValues();
  Eigen::VectorXd inv(s.size());
  for (int i = 0; i < s.size(); ++i) inv[i] = s[i] / (s[i] * s[i] + ridge);
  return svd.matrixV() * inv.asDiagonal() * (svd.matrixU().transpose() * b);
}

double RewardTrendModel::predict(const Eigen::VectorXd& x) const {
  return alpha.dot(feature_map(x, degree));
}

RewardTrendModel fit_reward_trend(const Eigen::MatrixXd& X, const Eigen::VectorXd& y,
                                  int degree, double ridge) {
  if (X.rows() != y.size() || X.rows() == 0) {
    throw ConfigError("fit_reward_trend: bad data shape");
  }
  RewardTrendModel m;
  m.degree = degree;
  m.alpha = ridge_solve(feature_matrix(X, degree), y, ridge);
  return m;
}

double NoiseModel::sigma(const Eigen::VectorXd& x) const {
  if (beta.size() == 0) return z + zeta;  // constant model
  double e = beta.dot(feature_map(x, degree));
  e = std::min(e, 500.0);  // keep exp finite
  return z * std::exp(e) + zeta;
}

Eigen::VectorXd NoiseModel::sigma_at(const Eigen::MatrixXd& X) const {
  Eigen::VectorXd out(X.rows());
  for (int i = 0; i < X.rows(); ++i) out[i] = sigma(X.row(i));
  return out;
}

NoiseModel NoiseModel::constant(double sigma_nu, int dim_degree) {
  NoiseModel m;
  m.z = 0.0;
  m.beta = Eigen::VectorXd();
  m.zeta = std::max(sigma_nu, 1e-6);
  m.degree = dim_degree;
  m.constant_fallback = true;
  return m;
}

NoiseModel fit_noise_model(const Eigen::MatrixXd& X, const Eigen::VectorXd& y,
                           const RewardTrendModel& trend, int degree) {
  const int n = static_cast<int>(X.rows());
  if (n == 0 || y.size() != n) throw ConfigError("fit_noise_model: bad data shape");

  Eigen::VectorXd residuals(n);
  for (int i = 0; i < n; ++i) {
    residuals[i] = std::abs(y[i] - trend.predict(X.row(i)));
  }

  const int m = feature_count(static_cast<int>(X.cols()), degree);
  if (n < m + 1) {
    // Not enough points to resolve the residual shape.
    const double mean_r = residuals.mean();
    const double var = (residuals.array() - mean_r).square().sum() / std::max(1, n - 1);
    return NoiseModel::constant(std::sqrt(var), degree);
  }

  std::vector<double> sorted(residuals.data(), residuals.data() + n);
  const auto mid = sorted.begin() + n / 2;
  std::nth_element(sorted.begin(), mid, sorted.end());
  const double zeta = std::max(1e-6, 0.05 * *mid);

  Eigen::VectorXd target(n);
  for (int i = 0; i < n; ++i) {
    target[i] = std::log(std::max(residuals[i] - zeta, 1e-8));
  }
  const Eigen::VectorXd w = ridge_solve(feature_matrix(X, degree), target, 1e-6);

  NoiseModel out;
  out.degree = degree;
  out.zeta = zeta;
  out.z = std::exp(w[0]);  // bias absorbs log z
  out.beta = w;
  out.beta[0] = 0.0;
  return out;
}

}  // namespace mpctune
