#pragma once

#include <Eigen/Dense>
#include <functional>
#include <vector>

#include "mpctune/env.hpp"
#include "mpctune/gamma_dist.hpp"

namespace mpctune {

// Controller hyper-parameters: temperature, control std, horizon, rollouts.
struct MppiConfig {
  double lambda = 1.0;
  double sigma_eps = 1.0;
  int horizon = 20;
  int rollouts = 400;

  void validate() const;
};

// Rolling sequence of optimal actions, length horizon, initialized to zeros.
// Entries are kept unclipped; clipping happens on perturbed rollout actions
// and on the executed action.
struct ActionPlan {
  std::vector<double> actions;

  explicit ActionPlan(int horizon = 0) : actions(static_cast<std::size_t>(horizon), 0.0) {}
  int size() const { return static_cast<int>(actions.size()); }
  double operator[](int i) const { return actions[static_cast<std::size_t>(i)]; }
  double& operator[](int i) { return actions[static_cast<std::size_t>(i)]; }
};

// Per-call diagnostics: the sampled perturbations, rollout costs, and the
// normalized weights.
struct RolloutBatch {
  Eigen::MatrixXd perturbations;  // M x T
  Eigen::VectorXd costs;          // M
  Eigen::VectorXd weights;        // M
};

using StateCostFn = std::function<double(const State&)>;

// Cost of one predicted trajectory s_{t+1}..s_{t+T}: terminal cost of the
// last state plus the running cost of the first T-1. The terminal cost is
// the same function as the instant cost.
double trajectory_cost(const std::vector<State>& states, const StateCostFn& cost_fn);

// Information-theoretic weights: softmax over
//   -(1/lambda) * (C_j + (lambda/sigma_eps^2) * sum_i a*_i * (a*_i + eps_ij))
// stabilized by subtracting the max exponent. Rollouts with infinite cost get
// zero weight; throws NumericError if every rollout is infinite.
Eigen::VectorXd compute_weights(const Eigen::VectorXd& costs,
                                const Eigen::MatrixXd& perturbations, const ActionPlan& plan,
                                const MppiConfig& cfg);

struct PlanStepResult {
  double action = 0.0;  // first updated action, clipped to the actuator bound
  ActionPlan plan;      // shifted left by one with a zero appended
  ActionPlan updated;   // post-update, pre-shift (diagnostics)
  RolloutBatch batch;
};

// One receding-horizon planning step: sample M perturbation sequences, roll
// each out on the randomized internal model (one parameter draw per rollout,
// held for the whole rollout), weight, and average the perturbations into the
// plan. Each rollout uses an independent deterministic substream, so results
// do not depend on evaluation order.
PlanStepResult plan_step(const ActionPlan& plan, const State& current, const Task& task,
                         const std::vector<GammaSpec>& model_dist, const MppiConfig& cfg,
                         Rng& rng);

// Convenience wrapper owning the rolling plan across an episode.
class MppiController {
 public:
  explicit MppiController(MppiConfig cfg) : cfg_(std::move(cfg)), plan_(cfg_.horizon) {
    cfg_.validate();
  }

  void reset() { plan_ = ActionPlan(cfg_.horizon); }

  // Plans from `current` and returns the executed (clipped) action.
  double step(const State& current, const Task& task, const std::vector<GammaSpec>& model_dist,
              Rng& rng) {
    PlanStepResult r = plan_step(plan_, current, task, model_dist, cfg_, rng);
    plan_ = std::move(r.plan);
    return r.action;
  }

  const MppiConfig& config() const { return cfg_; }
  const ActionPlan& plan() const { return plan_; }

 private:
  MppiConfig cfg_;
  ActionPlan plan_;
};

// Sampled physical parameters for one rollout, drawn by name ("m" -> mass,
// "l" -> length); parameters not present keep their default of 1.0.
PhysicalParams sample_params(const std::vector<GammaSpec>& dist, Rng& rng);

}  // namespace mpctune
