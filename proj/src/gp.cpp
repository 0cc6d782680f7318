#include "mpctune/gp.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "mpctune/errors.hpp"
#include "mpctune/opt.hpp"

namespace mpctune {

namespace {
constexpr double kLog2Pi = 1.8378770664093454836;
}

void KernelParams::validate() const {
  if (!(signal_var > 0.0)) throw ConfigError("kernel: signal variance must be positive");
  for (int i = 0; i < lengthscales.size(); ++i) {
    if (!(lengthscales[i] > 0.0)) throw ConfigError("kernel: lengthscales must be positive");
  }
}

double kernel(const Eigen::VectorXd& a, const Eigen::VectorXd& b, const KernelParams& kp) {
  if (a.size() != b.size()) throw ConfigError("kernel: point dimensions differ");
  double q = 0.0;
  for (int i = 0; i < a.size(); ++i) {
    const double d = (a[i] - b[i]) / kp.lengthscales[i];
    q += d * d;
  }
  return kp.signal_var * std::exp(-0.5 * q);
}

Eigen::MatrixXd kernel_matrix(const Eigen::MatrixXd& X, const KernelParams& kp) {
  const int n = static_cast<int>(X.rows());
  Eigen::MatrixXd K(n, n);
  for (int i = 0; i < n; ++i) {
    K(i, i) = kp.signal_var;
    for (int j = i + 1; j < n; ++j) {
      const double v = kernel(X.row(i), X.row(j), kp);
      K(i, j) = v;
      K(j, i) = v;
    }
  }
  return K;
}

Eigen::VectorXd kernel_vector(const Eigen::MatrixXd& X, const Eigen::VectorXd& x_star,
                              const KernelParams& kp) {
  Eigen::VectorXd k(X.rows());
  for (int i = 0; i < X.rows(); ++i) k[i] = kernel(X.row(i), x_star, kp);
  return k;
}

void ObservationSet::add(const Eigen::VectorXd& x, double y) {
  if (size() > 0 && x.size() != dim()) throw ConfigError("ObservationSet: dimension mismatch");
  Eigen::VectorXd row = x;
  // Deterministic de-duplication: nudge until no row is within 1e-10.
  for (double delta = 1e-8;; delta *= 2.0) {
    bool dup = false;
    for (int i = 0; i < size() && !dup; ++i) {
      dup = (X_.row(i).transpose() - row).norm() < 1e-10;
    }
    if (!dup) break;
    for (int i = 0; i < row.size(); ++i) {
      row[i] += (row[i] > 0.5 ? -delta : delta);
    }
  }
  X_.conservativeResize(size() + 1, row.size());
  X_.row(size() - 1) = row.transpose();
  y_raw_.conservativeResize(y_raw_.size() + 1);
  y_raw_[y_raw_.size() - 1] = y;
}

void ObservationSet::refresh_stats() {
  if (size() == 0) throw ConfigError("ObservationSet: no observations");
  y_mean_ = y_raw_.mean();
  const double var = (y_raw_.array() - y_mean_).square().sum() /
                     std::max(1, size() - 1);
  y_std_ = std::max(std::sqrt(var), 1e-12);
}

Eigen::VectorXd ObservationSet::y_standardized() const {
  return (y_raw_.array() - y_mean_) / y_std_;
}

CholResult cholesky_with_jitter(const Eigen::MatrixXd& A) {
  // Fixed escalation sequence so results are reproducible.
  static constexpr double kJitters[] = {0.0,   1e-10, 1e-9, 1e-8, 1e-7,
                                        1e-6,  1e-5,  1e-4};
  for (double jitter : kJitters) {
    Eigen::MatrixXd B = A;
    if (jitter > 0.0) B.diagonal().array() += jitter;
    Eigen::LLT<Eigen::MatrixXd> llt(B);
    if (llt.info() == Eigen::Success) {
      return {llt.matrixL(), jitter};
    }
  }
  throw NumericError("cholesky_with_jitter: factorization failed at jitter 1e-4");
}

double log_marginal_likelihood(const KernelParams& kp, const Eigen::VectorXd& noise_var,
                               const Eigen::MatrixXd& X, const Eigen::VectorXd& y) {
  const int n = static_cast<int>(X.rows());
  if (n == 0) throw ConfigError("log_marginal_likelihood: empty data");
  if (noise_var.size() != n || y.size() != n) {
    throw ConfigError("log_marginal_likelihood: size mismatch");
  }
  for (int i = 0; i < n; ++i) {
    if (noise_var[i] < 0.0) throw ConfigError("log_marginal_likelihood: negative noise");
  }
  Eigen::MatrixXd K = kernel_matrix(X, kp);
  K.diagonal() += noise_var;
  const CholResult chol = cholesky_with_jitter(K);
  const Eigen::VectorXd alpha = chol.L.transpose().triangularView<Eigen::Upper>().solve(
      chol.L.triangularView<Eigen::Lower>().solve(y));
  const double log_det = 2.0 * chol.L.diagonal().array().log().sum();
  return -0.5 * y.dot(alpha) - 0.5 * log_det - 0.5 * n * kLog2Pi;
}

void SurrogateModel::fit(const Eigen::MatrixXd& X, const Eigen::VectorXd& y_standardized,
                         const Eigen::VectorXd& noise_var, const KernelParams& kp) {
  kp.validate();
  if (X.rows() == 0) throw ConfigError("SurrogateModel: empty data");
  if (noise_var.size() != X.rows() || y_standardized.size() != X.rows()) {
    throw ConfigError("SurrogateModel: size mismatch");
  }
  Eigen::MatrixXd K = kernel_matrix(X, kp);
  K.diagonal() += noise_var;
  const CholResult chol = cholesky_with_jitter(K);
  X_ = X;
  L_ = chol.L;
  jitter_ = chol.jitter;
  alpha_ = L_.transpose().triangularView<Eigen::Upper>().solve(
      L_.triangularView<Eigen::Lower>().solve(y_standardized));
  kp_ = kp;
  fitted_ = true;
}

Posterior SurrogateModel::posterior(const Eigen::VectorXd& x_star) const {
  if (!fitted_) throw ConfigError("SurrogateModel: posterior before fit");
  const Eigen::VectorXd k_star = kernel_vector(X_, x_star, kp_);
  Posterior p;
  p.mean = k_star.dot(alpha_);
  const Eigen::VectorXd v = L_.triangularView<Eigen::Lower>().solve(k_star);
  p.variance = std::max(0.0, kp_.signal_var - v.squaredNorm());
  return p;
}

NoiseShape NoiseShape::constant(int n) {
  NoiseShape s;
  s.base = Eigen::VectorXd::Ones(n);
  s.offset = Eigen::VectorXd::Zero(n);
  return s;
}

Eigen::VectorXd NoiseShape::variance(double scale) const {
  return (scale * base + offset).array().square();
}

namespace {

// Optimization variables: [log scale, log sigma_n, log l_1..l_d].
struct FitBounds {
  double log_scale_lo = std::log(1e-4);
  double log_scale_hi = std::log(10.0);
  double log_signal_lo = std::log(1e-2);   // sigma_n (std) bounds
  double log_signal_hi = std::log(10.0);
  double log_length_lo = std::log(1e-2);
  double log_length_hi = std::log(10.0);
};

KernelParams unpack_kernel(const Eigen::VectorXd& theta, int d) {
  KernelParams kp;
  const double sigma_n = std::exp(theta[1]);
  kp.signal_var = sigma_n * sigma_n;
  kp.lengthscales.resize(d);
  for (int i = 0; i < d; ++i) kp.lengthscales[i] = std::exp(theta[2 + i]);
  return kp;
}

}  // namespace

KernelFit fit_kernel(const Eigen::MatrixXd& X, const Eigen::VectorXd& y,
                     const NoiseShape& shape, int restarts, Rng& rng, int max_iterations) {
  const int n = static_cast<int>(X.rows());
  const int d = static_cast<int>(X.cols());
  if (n == 0) throw ConfigError("fit_kernel: empty data");
  if (shape.base.size() != n || shape.offset.size() != n) {
    throw ConfigError("fit_kernel: noise shape size mismatch");
  }
  if (restarts < 1) throw ConfigError("fit_kernel: restarts must be >= 1");

  const FitBounds b;
  const int p = 2 + d;
  Eigen::VectorXd lo(p), hi(p);
  lo[0] = b.log_scale_lo;
  hi[0] = b.log_scale_hi;
  lo[1] = b.log_signal_lo;
  hi[1] = b.log_signal_hi;
  for (int i = 0; i < d; ++i) {
    lo[2 + i] = b.log_length_lo;
    hi[2 + i] = b.log_length_hi;
  }

  const ObjectiveFn neg_lml = [&](const Eigen::VectorXd& theta) -> double {
    const double scale = std::exp(std::min(theta[0], b.log_scale_hi + 1.0));
    const KernelParams kp = unpack_kernel(theta, d);
    try {
      return -log_marginal_likelihood(kp, shape.variance(scale), X, y);
    } catch (const NumericError&) {
      return std::numeric_limits<double>::infinity();
    }
  };

  KernelFit best;
  best.log_marginal = -std::numeric_limits<double>::infinity();
  bool any = false;
  for (int r = 0; r < restarts; ++r) {
    Eigen::VectorXd start(p);
    if (r == 0) {
      start[0] = std::log(0.1);
      start[1] = std::log(1.0);
      for (int i = 0; i < d; ++i) start[2 + i] = std::log(0.3);
    } else {
      for (int i = 0; i < p; ++i) start[i] = rng.uniform(lo[i], hi[i]);
    }
    const OptResult res = minimize_bounded(neg_lml, start, lo, hi, max_iterations);
    if (!std::isfinite(res.f)) continue;
    if (!any || -res.f > best.log_marginal) {
      any = true;
      best.kernel = unpack_kernel(res.x, d);
      best.noise_scale = std::exp(res.x[0]);
      best.log_marginal = -res.f;
    }
  }

  if (!any) {
    // Median-heuristic fallback: unit signal, lengthscale from pairwise
    // distances, noise scale from the target spread.
    best.degraded = true;
    std::vector<double> dists;
    for (int i = 0; i < n; ++i) {
      for (int j = i + 1; j < n; ++j) {
        dists.push_back((X.row(i) - X.row(j)).norm());
      }
    }
    double med = 0.5;
    if (!dists.empty()) {
      const auto mid = dists.begin() + static_cast<std::ptrdiff_t>(dists.size() / 2);
      std::nth_element(dists.begin(), mid, dists.end());
      med = std::max(*mid, 1e-2);
    }
    best.kernel.signal_var = 1.0;
    best.kernel.lengthscales = Eigen::VectorXd::Constant(d, med);
    best.noise_scale = 0.1;
    best.log_marginal = -std::numeric_limits<double>::infinity();
  }
  return best;
}

}  // namespace mpctune
