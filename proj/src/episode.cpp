#include "mpctune/episode.hpp"

namespace mpctune {

EpisodeResult run_episode(const Task& task, MppiController& controller,
                          const std::vector<GammaSpec>& model_dist,
                          const PhysicalParams& true_params, int n_s, std::uint64_t seed) {
  if (n_s < 1) throw ConfigError("run_episode: n_s must be >= 1");
  if (!true_params.positive()) throw ConfigError("run_episode: true params must be positive");

  Rng rng(seed);
  controller.reset();

  EpisodeResult out;
  out.seed = seed;
  out.per_step_rewards.reserve(static_cast<std::size_t>(n_s));

  State s = initial_state(task, rng);
  for (int t = 0; t < n_s; ++t) {
    const double action = controller.step(s, task, model_dist, rng);
    State next = rk4_step(task, s, action, true_params, task.dt);
    if (!next.finite()) {
      throw DivergenceError("run_episode: true dynamics diverged", t);
    }
    next = observed(task, next);
    const double r = reward(task, next, action);
    out.per_step_rewards.push_back(r);
    out.cumulative_reward += r;
    s = next;
  }
  out.final_state = s;
  return out;
}

}  // namespace mpctune
