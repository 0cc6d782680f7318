#include "mpctune/mppi.hpp"

#include <cmath>
#include <limits>

namespace mpctune {

void MppiConfig::validate() const {
  if (!(lambda > 0.0)) throw ConfigError("mppi: lambda must be positive");
  if (!(sigma_eps > 0.0)) throw ConfigError("mppi: sigma_eps must be positive");
  if (horizon < 1) throw ConfigError("mppi: horizon must be >= 1");
  if (rollouts < 1) throw ConfigError("mppi: rollouts must be >= 1");
}

double trajectory_cost(const std::vector<State>& states, const StateCostFn& cost_fn) {
  if (states.empty()) throw ConfigError("trajectory_cost: empty trajectory");
  double total = 0.0;
  for (const State& s : states) {
    if (!s.finite()) throw NumericError("trajectory_cost: non-finite state");
    total += cost_fn(s);  // terminal cost q == instant cost c
  }
  return total;
}

Eigen::VectorXd compute_weights(const Eigen::VectorXd& costs,
                                const Eigen::MatrixXd& perturbations, const ActionPlan& plan,
                                const MppiConfig& cfg) {
  const int m = static_cast<int>(costs.size());
  if (perturbations.rows() != m || perturbations.cols() != plan.size()) {
    throw ConfigError("compute_weights: perturbation matrix shape mismatch");
  }
  Eigen::VectorXd exponents(m);
  double max_exp = -std::numeric_limits<double>::infinity();
  for (int j = 0; j < m; ++j) {
    if (std::isinf(costs[j])) {
      exponents[j] = -std::numeric_limits<double>::infinity();
      continue;
    }
    double control = 0.0;
    for (int i = 0; i < plan.size(); ++i) {
      control += plan[i] * (plan[i] + perturbations(j, i));
    }
    exponents[j] = -(costs[j] + cfg.lambda / (cfg.sigma_eps * cfg.sigma_eps) * control) /
                   cfg.lambda;
    max_exp = std::max(max_exp, exponents[j]);
  }
  if (!std::isfinite(max_exp)) {
    throw NumericError("compute_weights: every rollout diverged");
  }
  Eigen::VectorXd w(m);
  double eta = 0.0;
  for (int j = 0; j < m; ++j) {
    w[j] = std::exp(exponents[j] - max_exp);
    eta += w[j];
  }
  w /= eta;
  return w;
}

PhysicalParams sample_params(const std::vector<GammaSpec>& dist, Rng& rng) {
  PhysicalParams p;
  for (const GammaSpec& spec : dist) {
    const double value = sample(spec, rng);
    if (spec.name == "m") {
      p.mass = value;
    } else if (spec.name == "l") {
      p.length = value;
    } else {
      throw ConfigError("sample_params: unknown parameter '" + spec.name + "'");
    }
  }
  return p;
}

PlanStepResult plan_step(const ActionPlan& plan, const State& current, const Task& task,
                         const std::vector<GammaSpec>& model_dist, const MppiConfig& cfg,
                         Rng& rng) {
  cfg.validate();
  if (plan.size() != cfg.horizon) throw ConfigError("plan_step: plan length != horizon");
  if (!current.finite()) throw NumericError("plan_step: non-finite current state");

  const int m = cfg.rollouts;
  const int t_len = cfg.horizon;
  const double inf = std::numeric_limits<double>::infinity();

  PlanStepResult out;
  out.batch.perturbations.resize(m, t_len);
  out.batch.costs.resize(m);

  // One substream per rollout: rollouts are order-independent and may run in
  // parallel without changing results.
  const std::uint64_t base = rng.next_u64();
  for (int j = 0; j < m; ++j) {
    Rng r(mix_seed(base, static_cast<std::uint64_t>(j)));
    PhysicalParams params;
    try {
      params = sample_params(model_dist, r);
    } catch (const ConfigError&) {
      throw;  // misconfigured distribution, not a numeric failure
    }

    double cost = 0.0;
    State s = current;
    bool diverged = false;
    for (int i = 0; i < t_len; ++i) {
      const double eps = cfg.sigma_eps * r.normal();
      out.batch.perturbations(j, i) = eps;
      if (diverged) continue;  // keep drawing so the stream layout is fixed
      const double a = task.clip_action(plan[i] + eps);
      s = rk4_step(task, s, a, params, task.dt);
      if (!s.finite()) {
        diverged = true;
        continue;
      }
      cost += -reward(task, s, 0.0);
    }
    out.batch.costs[j] = diverged ? inf : cost;
  }

  out.batch.weights = compute_weights(out.batch.costs, out.batch.perturbations, plan, cfg);

  out.updated = plan;
  for (int i = 0; i < t_len; ++i) {
    double delta = 0.0;
    for (int j = 0; j < m; ++j) {
      delta += out.batch.weights[j] * out.batch.perturbations(j, i);
    }
    out.updated[i] += delta;
  }

  out.action = task.clip_action(out.updated[0]);
  out.plan = ActionPlan(t_len);
  for (int i = 0; i + 1 < t_len; ++i) out.plan[i] = out.updated[i + 1];
  return out;
}

}  // namespace mpctune
