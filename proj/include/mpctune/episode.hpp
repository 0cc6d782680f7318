#pragma once

#include <cstdint>
#include <vector>

#include "mpctune/env.hpp"
#include "mpctune/mppi.hpp"

namespace mpctune {

struct EpisodeResult {
  double cumulative_reward = 0.0;
  std::vector<double> per_step_rewards;
  State final_state;
  std::uint64_t seed = 0;
};

// Runs n_s control steps. At every step the controller plans against the
// randomized internal model (parameters resampled from `model_dist` per
// rollout) and the first optimal action is applied to the true dynamics.
// Throws DivergenceError with the step index if the true dynamics blow up.
EpisodeResult run_episode(const Task& task, MppiController& controller,
                          const std::vector<GammaSpec>& model_dist,
                          const PhysicalParams& true_params, int n_s, std::uint64_t seed);

}  // namespace mpctune
