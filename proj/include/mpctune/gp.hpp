#pragma once

#include <Eigen/Dense>
#include <vector>

#include "mpctune/rng.hpp"

namespace mpctune {

// Squared-exponential kernel with one lengthscale per input dimension.
struct KernelParams {
  double signal_var = 1.0;        // sigma_n^2
  Eigen::VectorXd lengthscales;   // per dimension, strictly positive

  void validate() const;
};

double kernel(const Eigen::VectorXd& a, const Eigen::VectorXd& b, const KernelParams& kp);
Eigen::MatrixXd kernel_matrix(const Eigen::MatrixXd& X, const KernelParams& kp);
Eigen::VectorXd kernel_vector(const Eigen::MatrixXd& X, const Eigen::VectorXd& x_star,
                              const KernelParams& kp);

// Design matrix of normalized search points plus raw rewards. Rows closer
// than 1e-10 to an existing one are deterministically perturbed on insert so
// the covariance stays invertible. Target standardization stats are captured
// explicitly (refresh_stats) so they can be frozen after the initial batch.
class ObservationSet {
 public:
  void add(const Eigen::VectorXd& x, double y);
  void refresh_stats();

  int size() const { return static_cast<int>(y_raw_.size()); }
  int dim() const { return static_cast<int>(X_.cols()); }
  const Eigen::MatrixXd& X() const { return X_; }
  const Eigen::VectorXd& y_raw() const { return y_raw_; }
  Eigen::VectorXd y_standardized() const;

  double y_mean() const { return y_mean_; }
  double y_std() const { return y_std_; }
  double destandardize(double y_std_scale) const { return y_std_scale * y_std_ + y_mean_; }

 private:
  Eigen::MatrixXd X_;
  Eigen::VectorXd y_raw_;
  double y_mean_ = 0.0;
  double y_std_ = 1.0;
};

struct Posterior {
  double mean = 0.0;
  double variance = 0.0;  // clamped at zero from below
};

// Cholesky of A + jitter*I with a fixed escalation sequence
// (0, 1e-10, 1e-9, ..., 1e-4). Throws NumericError once the sequence is
// exhausted.
struct CholResult {
  Eigen::MatrixXd L;
  double jitter = 0.0;
};
CholResult cholesky_with_jitter(const Eigen::MatrixXd& A);

// Gaussian log marginal likelihood of standardized targets:
//   -1/2 y^T (K + S)^-1 y - 1/2 log|K + S| - n/2 log(2 pi)
// where S = diag(noise_var).
double log_marginal_likelihood(const KernelParams& kp, const Eigen::VectorXd& noise_var,
                               const Eigen::MatrixXd& X, const Eigen::VectorXd& y);

// Fitted GP with a cached factorization; zero prior mean on the standardized
// scale. Immutable after fit() and shareable across threads for queries.
class SurrogateModel {
 public:
  // noise_var holds sigma_nu^2(x_i) per training point.
  void fit(const Eigen::MatrixXd& X, const Eigen::VectorXd& y_standardized,
           const Eigen::VectorXd& noise_var, const KernelParams& kp);

  Posterior posterior(const Eigen::VectorXd& x_star) const;

  bool fitted() const { return fitted_; }
  const KernelParams& params() const { return kp_; }
  double jitter() const { return jitter_; }

 private:
  Eigen::MatrixXd X_;
  Eigen::MatrixXd L_;
  Eigen::VectorXd alpha_;
  KernelParams kp_;
  double jitter_ = 0.0;
  bool fitted_ = false;
};

// Scale family for the noise std at the training points:
//   sigma_i(scale) = scale * base_i + offset_i.
// Homoscedastic: base = 1, offset = 0 (scale plays sigma_nu). Heteroscedastic:
// base_i = exp(beta^T rho(x_i)), offset_i = zeta (scale plays z).
struct NoiseShape {
  Eigen::VectorXd base;
  Eigen::VectorXd offset;

  static NoiseShape constant(int n);
  Eigen::VectorXd variance(double scale) const;
};

struct KernelFit {
  KernelParams kernel;
  double noise_scale = 0.0;
  double log_marginal = 0.0;
  bool degraded = false;  // every start failed; median-heuristic fallback
};

// Maximum-likelihood fit of {noise scale, signal std, lengthscales} in log
// space by multi-start bounded quasi-Newton search. Inputs are assumed
// normalized to [0,1]^d and targets standardized.
KernelFit fit_kernel(const Eigen::MatrixXd& X, const Eigen::VectorXd& y,
                     const NoiseShape& shape, int restarts, Rng& rng,
                     int max_iterations = 200);

}  // namespace mpctune
