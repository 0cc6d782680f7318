#include "mpctune/cma_es.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "mpctune/errors.hpp"

namespace mpctune {

int cma_population_size(int dim) {
  return 4 + static_cast<int>(std::floor(3.0 * std::log(static_cast<double>(dim))));
}

namespace {

struct CmaState {
  Eigen::VectorXd mean;
  double sigma = 0.3;
  Eigen::MatrixXd C;
  Eigen::VectorXd p_sigma;
  Eigen::VectorXd p_c;
  Eigen::MatrixXd B;
  Eigen::VectorXd D;  // sqrt of eigenvalues
  int eigen_age = 0;

  void reset(const Eigen::VectorXd& m0, int d) {
    mean = m0;
    sigma = 0.3;
    C = Eigen::MatrixXd::Identity(d, d);
    p_sigma = Eigen::VectorXd::Zero(d);
    p_c = Eigen::VectorXd::Zero(d);
    B = Eigen::MatrixXd::Identity(d, d);
    D = Eigen::VectorXd::Ones(d);
  }

  bool update_eigen() {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(C);
    if (es.info() != Eigen::Success) return false;
    Eigen::VectorXd ev = es.eigenvalues();
    for (int i = 0; i < ev.size(); ++i) {
      if (!std::isfinite(ev[i])) return false;
      ev[i] = std::max(ev[i], 1e-20);
    }
    if (ev.maxCoeff() / ev.minCoeff() > 1e14) return false;
    B = es.eigenvectors();
    D = ev.cwiseSqrt();
    return true;
  }
};

}  // namespace

TuningTrace cma_es(const TuneObjective& objective, const SearchSpace& space, int budget,
                   Rng& rng) {
  const int d = space.size();
  if (d < 1) throw ConfigError("cma_es: empty search space");

  const int lambda = cma_population_size(d);
  const int mu = lambda / 2;
  Eigen::VectorXd weights(mu);
  for (int i = 0; i < mu; ++i) {
    weights[i] = std::log((lambda + 1) / 2.0) - std::log(i + 1.0);
  }
  weights /= weights.sum();
  const double mu_eff = 1.0 / weights.squaredNorm();

  const double c_sigma = (mu_eff + 2.0) / (d + mu_eff + 5.0);
  const double d_sigma =
      1.0 + 2.0 * std::max(0.0, std::sqrt((mu_eff - 1.0) / (d + 1.0)) - 1.0) + c_sigma;
  const double c_c = (4.0 + mu_eff / d) / (d + 4.0 + 2.0 * mu_eff / d);
  const double c_1 = 2.0 / ((d + 1.3) * (d + 1.3) + mu_eff);
  const double c_mu = std::min(1.0 - c_1, 2.0 * (mu_eff - 2.0 + 1.0 / mu_eff) /
                                              ((d + 2.0) * (d + 2.0) + mu_eff));
  const double chi_n =
      std::sqrt(static_cast<double>(d)) * (1.0 - 1.0 / (4.0 * d) + 1.0 / (21.0 * d * d));

  TuningTrace trace;
  trace.method = TuneMethod::cma_es;

  CmaState st;
  st.reset(Eigen::VectorXd::Constant(d, 0.5), d);

  double best = -std::numeric_limits<double>::infinity();
  Eigen::VectorXd best_unit = st.mean;
  int evals = 0;

  while (evals < budget) {
    const int pop = std::min(lambda, budget - evals);
    Eigen::MatrixXd ys(d, lambda);
    Eigen::MatrixXd xs(d, lambda);
    Eigen::VectorXd fitness(lambda);
    fitness.setConstant(std::numeric_limits<double>::infinity());

    for (int k = 0; k < pop; ++k) {
      Eigen::VectorXd y(d), x(d);
      bool inside = false;
      for (int attempt = 0; attempt < 100 && !inside; ++attempt) {
        Eigen::VectorXd z(d);
        for (int i = 0; i < d; ++i) z[i] = rng.normal();
        y = st.B * (st.D.asDiagonal() * z);
        x = st.mean + st.sigma * y;
        inside = (x.array() >= 0.0).all() && (x.array() <= 1.0).all();
      }
      if (!inside) {
        x = x.cwiseMax(0.0).cwiseMin(1.0);
        y = (x - st.mean) / st.sigma;
      }
      ys.col(k) = y;
      xs.col(k) = x;

      const Eigen::VectorXd raw = space.denormalize(x);
      TraceRow row;
      row.kind = RowKind::iteration;
      row.index = evals + 1;
      row.x = raw;
      try {
        row.observed = objective(raw, evals);
      } catch (const NumericError&) {
        row.observed = std::isfinite(best) ? best - 1.0 : -1e30;
        row.failed = true;
      }
      fitness[k] = -row.observed;  // minimize
      if (row.observed > best) {
        best = row.observed;
        best_unit = x;
      }
      row.best_so_far = best;
      trace.rows.push_back(std::move(row));
      ++evals;
    }
    if (pop < lambda) break;  // budget exhausted mid-generation

    std::vector<int> order(static_cast<std::size_t>(lambda));
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](int a, int b) { return fitness[a] < fitness[b]; });

    Eigen::VectorXd y_w = Eigen::VectorXd::Zero(d);
    for (int i = 0; i < mu; ++i) y_w += weights[i] * ys.col(order[static_cast<std::size_t>(i)]);

    st.mean += st.sigma * y_w;

    // C^{-1/2} y_w for the sigma path.
    Eigen::VectorXd c_inv_sqrt_yw =
        st.B * (st.D.cwiseInverse().asDiagonal() * (st.B.transpose() * y_w));
    st.p_sigma = (1.0 - c_sigma) * st.p_sigma +
                 std::sqrt(c_sigma * (2.0 - c_sigma) * mu_eff) * c_inv_sqrt_yw;

    const double gens = static_cast<double>(trace.rows.size()) / lambda;
    const bool h_sigma =
        st.p_sigma.norm() / std::sqrt(1.0 - std::pow(1.0 - c_sigma, 2.0 * (gens + 1.0))) <
        (1.4 + 2.0 / (d + 1.0)) * chi_n;

    st.p_c = (1.0 - c_c) * st.p_c;
    if (h_sigma) st.p_c += std::sqrt(c_c * (2.0 - c_c) * mu_eff) * y_w;

    Eigen::MatrixXd rank_mu = Eigen::MatrixXd::Zero(d, d);
    for (int i = 0; i < mu; ++i) {
      const Eigen::VectorXd& y = ys.col(order[static_cast<std::size_t>(i)]);
      rank_mu += weights[i] * y * y.transpose();
    }
    const double delta_h = h_sigma ? 0.0 : c_c * (2.0 - c_c);
    st.C = (1.0 - c_1 - c_mu) * st.C +
           c_1 * (st.p_c * st.p_c.transpose() + delta_h * st.C) + c_mu * rank_mu;

    st.sigma *= std::exp((c_sigma / d_sigma) * (st.p_sigma.norm() / chi_n - 1.0));

    const bool healthy = st.update_eigen() && std::isfinite(st.sigma) && st.sigma < 1e7 &&
                         st.mean.allFinite();
    if (!healthy) {
      st.reset(best_unit, d);  // restart from the incumbent
    }
  }
  return trace;
}

}  // namespace mpctune
