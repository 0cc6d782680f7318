#include "mpctune/bo.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "mpctune/cma_es.hpp"
#include "mpctune/errors.hpp"
#include "mpctune/opt.hpp"

namespace mpctune {

std::string method_name(TuneMethod m) {
  switch (m) {
    case TuneMethod::hetero_bo: return "hetero-bo";
    case TuneMethod::homo_bo: return "homo-bo";
    case TuneMethod::cma_es: return "cma-es";
    case TuneMethod::random_search: return "random";
  }
  return "unknown";
}

TuneMethod method_from_name(const std::string& name) {
  if (name == "hetero-bo") return TuneMethod::hetero_bo;
  if (name == "homo-bo") return TuneMethod::homo_bo;
  if (name == "cma-es") return TuneMethod::cma_es;
  if (name == "random") return TuneMethod::random_search;
  throw ConfigError("unknown method '" + name +
                    "' (expected hetero-bo, homo-bo, cma-es or random)");
}

std::string row_kind_name(RowKind k) {
  switch (k) {
    case RowKind::batch: return "batch";
    case RowKind::start: return "start";
    case RowKind::iteration: return "iter";
  }
  return "unknown";
}

double TuningTrace::best_reward() const {
  double best = -std::numeric_limits<double>::infinity();
  for (const TraceRow& r : rows) best = std::max(best, r.observed);
  return best;
}

Eigen::VectorXd TuningTrace::best_point() const {
  const TraceRow* best = nullptr;
  for (const TraceRow& r : rows) {
    if (best == nullptr || r.observed > best->observed) best = &r;
  }
  if (best == nullptr) throw ConfigError("trace is empty");
  return best->x;
}

double TuningTrace::best_so_far_final() const {
  double value = -std::numeric_limits<double>::infinity();
  bool any = false;
  for (const TraceRow& r : rows) {
    if (r.kind == RowKind::batch) continue;
    value = r.best_so_far;
    any = true;
  }
  if (!any) {
    for (const TraceRow& r : rows) value = r.best_so_far;
  }
  return value;
}

double ucb(const Posterior& p, double delta) {
  if (delta < 0.0) throw ConfigError("ucb: delta must be >= 0");
  return p.mean + delta * std::sqrt(std::max(0.0, p.variance));
}

Eigen::VectorXd maximize_acquisition(const SurrogateModel& model, const ObservationSet& data,
                                     double delta, int restarts, Rng& rng) {
  const int d = data.dim();
  const Eigen::VectorXd lo = Eigen::VectorXd::Zero(d);
  const Eigen::VectorXd hi = Eigen::VectorXd::Ones(d);

  const ObjectiveFn neg_ucb = [&](const Eigen::VectorXd& x) {
    return -ucb(model.posterior(x), delta);
  };

  // Best observed point first, then uniform restarts.
  int best_row = 0;
  for (int i = 1; i < data.size(); ++i) {
    if (data.y_raw()[i] > data.y_raw()[best_row]) best_row = i;
  }

  Eigen::VectorXd best_x;
  double best_f = std::numeric_limits<double>::infinity();
  for (int r = 0; r <= restarts; ++r) {
    Eigen::VectorXd start(d);
    if (r == 0) {
      start = data.X().row(best_row).transpose();
    } else {
      for (int i = 0; i < d; ++i) start[i] = rng.uniform();
    }
    const OptResult res = minimize_bounded(neg_ucb, start, lo, hi, 100);
    if (best_x.size() == 0 || res.f < best_f) {
      best_f = res.f;
      best_x = res.x;
    }
  }
  return best_x.cwiseMax(lo).cwiseMin(hi);
}

Eigen::MatrixXd latin_hypercube(int n, int d, Rng& rng) {
  if (n < 1 || d < 1) throw ConfigError("latin_hypercube: n and d must be >= 1");
  Eigen::MatrixXd out(n, d);
  std::vector<int> perm(static_cast<std::size_t>(n));
  for (int j = 0; j < d; ++j) {
    for (int i = 0; i < n; ++i) perm[static_cast<std::size_t>(i)] = i;
    for (int i = n - 1; i > 0; --i) {
      const int k = static_cast<int>(rng.below(static_cast<std::uint64_t>(i + 1)));
      std::swap(perm[static_cast<std::size_t>(i)], perm[static_cast<std::size_t>(k)]);
    }
    for (int i = 0; i < n; ++i) {
      out(i, j) = (perm[static_cast<std::size_t>(i)] + rng.uniform()) / n;
    }
  }
  return out;
}

TuningTrace random_search(const TuneObjective& objective, const SearchSpace& space, int budget,
                          Rng& rng) {
  TuningTrace trace;
  trace.method = TuneMethod::random_search;
  double best = -std::numeric_limits<double>::infinity();
  for (int k = 1; k <= budget; ++k) {
    Eigen::VectorXd unit(space.size());
    for (int i = 0; i < space.size(); ++i) unit[i] = rng.uniform();
    const Eigen::VectorXd x = space.denormalize(unit);
    TraceRow row;
    row.kind = RowKind::iteration;
    row.index = k;
    row.x = x;
    try {
      row.observed = objective(x, k - 1);
    } catch (const NumericError&) {
      row.observed = best > -std::numeric_limits<double>::infinity() ? best : -1e30;
      row.failed = true;
    }
    best = std::max(best, row.observed);
    row.best_so_far = best;
    trace.rows.push_back(std::move(row));
  }
  return trace;
}

namespace {

struct NoisePipeline {
  NoiseModel model;          // final model used for queries (z = MLE scale)
  RewardTrendModel trend;
  bool has_trend = false;
  double mle_scale = 0.0;
  KernelParams kernel;
  double log_marginal = 0.0;
  bool degraded = false;
};

// Shared fitting path for both BO flavors; they differ only in how the noise
// std varies with x.
NoisePipeline fit_surrogate(const ObservationSet& data, TuneMethod method,
                            const BoSettings& settings, Rng& rng) {
  const Eigen::VectorXd y = data.y_standardized();
  NoisePipeline out;

  NoiseShape shape;
  NoiseModel structure;  // beta/zeta fixed; scale replaced by the MLE below
  if (method == TuneMethod::hetero_bo) {
    if (settings.forced_noise.has_value()) {
      structure = *settings.forced_noise;
    } else {
      out.trend = fit_reward_trend(data.X(), y, settings.degree);
      out.has_trend = true;
      structure = fit_noise_model(data.X(), y, out.trend, settings.degree);
    }
    if (structure.beta.size() == 0) {
      // Constant noise: scale multiplies exp(0); keep zeta as fitted floor.
      shape.base = Eigen::VectorXd::Ones(data.size());
      shape.offset = Eigen::VectorXd::Constant(data.size(), structure.zeta);
    } else {
      shape.base.resize(data.size());
      for (int i = 0; i < data.size(); ++i) {
        const double e =
            std::min(structure.beta.dot(feature_map(data.X().row(i), structure.degree)), 500.0);
        shape.base[i] = std::exp(e);
      }
      shape.offset = Eigen::VectorXd::Constant(data.size(), structure.zeta);
    }
  } else {
    shape = NoiseShape::constant(data.size());
    structure = NoiseModel();
    structure.beta = Eigen::VectorXd();
    structure.zeta = 0.0;
    structure.degree = settings.degree;
  }

  const KernelFit fit = fit_kernel(data.X(), y, shape, settings.mle_restarts, rng);
  out.kernel = fit.kernel;
  out.mle_scale = fit.noise_scale;
  out.log_marginal = fit.log_marginal;
  out.degraded = fit.degraded;

  out.model = structure;
  out.model.z = fit.noise_scale;
  if (method != TuneMethod::hetero_bo) {
    out.model.zeta = 0.0;  // sigma_nu(x) = z = the MLE scalar
    out.model.constant_fallback = true;
  }
  return out;
}

Eigen::VectorXd noise_variance_at(const NoiseModel& noise, const Eigen::MatrixXd& X) {
  Eigen::VectorXd v(X.rows());
  for (int i = 0; i < X.rows(); ++i) {
    const double s = noise.sigma(X.row(i));
    v[i] = s * s;
  }
  return v;
}

}  // namespace

TuningTrace tune(const TuneObjective& objective, const SearchSpace& space, int budget,
                 TuneMethod method, const BoSettings& settings, Rng& rng) {
  if (method == TuneMethod::cma_es) return cma_es(objective, space, budget, rng);
  if (method == TuneMethod::random_search) return random_search(objective, space, budget, rng);
  if (settings.initial_batch < 1) throw ConfigError("tune: initial batch must be >= 1");
  if (budget < 0) throw ConfigError("tune: budget must be >= 0");

  TuningTrace trace;
  trace.method = method;

  // Phase 1: space-filling batch.
  const Eigen::MatrixXd batch = latin_hypercube(settings.initial_batch, space.size(), rng);
  ObservationSet data;
  int eval_index = 0;
  double batch_best = -std::numeric_limits<double>::infinity();
  double worst = std::numeric_limits<double>::infinity();
  for (int i = 0; i < settings.initial_batch; ++i) {
    const Eigen::VectorXd unit = batch.row(i).transpose();
    const Eigen::VectorXd x = space.denormalize(unit);
    TraceRow row;
    row.kind = RowKind::batch;
    row.index = i;
    row.x = x;
    try {
      row.observed = objective(x, eval_index++);
    } catch (const NumericError&) {
      if (!std::isfinite(worst)) throw;  // nothing observed yet to fall back on
      row.observed = worst;
      row.failed = true;
    }
    worst = std::min(worst, row.observed);
    batch_best = std::max(batch_best, row.observed);
    row.best_so_far = batch_best;
    data.add(unit, row.observed);
    trace.rows.push_back(std::move(row));
  }
  data.refresh_stats();  // standardization frozen from here on

  NoisePipeline pipeline = fit_surrogate(data, method, settings, rng);
  SurrogateModel model;
  model.fit(data.X(), data.y_standardized(), noise_variance_at(pipeline.model, data.X()),
            pipeline.kernel);

  trace.surrogate.present = true;
  trace.surrogate.kernel = pipeline.kernel;
  trace.surrogate.noise_scale = pipeline.mle_scale;
  trace.surrogate.noise = pipeline.model;
  trace.surrogate.trend = pipeline.trend;
  trace.surrogate.has_trend = pipeline.has_trend;
  trace.surrogate.y_mean = data.y_mean();
  trace.surrogate.y_std = data.y_std();
  trace.surrogate.log_marginal = pipeline.log_marginal;
  trace.surrogate.degraded = pipeline.degraded;

  if (budget == 0) return trace;

  // Iteration curve starts at the batch point with minimum observed reward.
  int worst_row = 0;
  for (int i = 1; i < data.size(); ++i) {
    if (data.y_raw()[i] < data.y_raw()[worst_row]) worst_row = i;
  }
  TraceRow start;
  start.kind = RowKind::start;
  start.index = 0;
  start.x = space.denormalize(data.X().row(worst_row).transpose());
  start.observed = data.y_raw()[worst_row];
  start.best_so_far = start.observed;
  double best = start.observed;
  trace.rows.push_back(std::move(start));

  // Phase 2: acquisition loop; kernel hyper-parameters stay frozen unless
  // refit_every is set.
  for (int k = 1; k <= budget; ++k) {
    const Eigen::VectorXd unit = maximize_acquisition(model, data, settings.delta,
                                                      settings.acq_restarts, rng);
    const Eigen::VectorXd x = space.denormalize(unit);
    TraceRow row;
    row.kind = RowKind::iteration;
    row.index = k;
    row.x = x;
    try {
      row.observed = objective(x, eval_index++);
    } catch (const NumericError&) {
      row.observed = worst;
      row.failed = true;
    }
    worst = std::min(worst, row.observed);
    data.add(unit, row.observed);

    if (settings.refit_every > 0 && k % settings.refit_every == 0) {
      pipeline = fit_surrogate(data, method, settings, rng);
      trace.surrogate.kernel = pipeline.kernel;
      trace.surrogate.noise_scale = pipeline.mle_scale;
      trace.surrogate.noise = pipeline.model;
      trace.surrogate.trend = pipeline.trend;
      trace.surrogate.log_marginal = pipeline.log_marginal;
    }
    model.fit(data.X(), data.y_standardized(), noise_variance_at(pipeline.model, data.X()),
              pipeline.kernel);

    best = std::max(best, row.observed);
    row.best_so_far = best;
    trace.rows.push_back(std::move(row));
  }
  return trace;
}

}  // namespace mpctune
