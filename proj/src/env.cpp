#include "mpctune/env.hpp"

namespace mpctune {

std::string task_name(TaskKind kind) {
  return kind == TaskKind::pendulum ? "pendulum" : "cartpole";
}

TaskKind task_from_name(const std::string& name) {
  if (name == "pendulum") return TaskKind::pendulum;
  if (name == "cartpole") return TaskKind::cartpole;
  throw ConfigError("unknown task '" + name + "' (expected pendulum or cartpole)");
}

State step(const Task& t, const State& s, double action, const PhysicalParams& p, double dt) {
  if (!s.finite() || !std::isfinite(action)) {
    throw NumericError("step: non-finite state or action");
  }
  if (!p.positive()) {
    throw ConfigError("step: physical parameters must be positive");
  }
  if (!(dt > 0.0)) {
    throw ConfigError("step: dt must be positive");
  }
  return rk4_step(t, s, action, p, dt);
}

State initial_state(const Task& t, Rng& rng) {
  if (t.kind == TaskKind::pendulum) {
    return State::of2(3.14159265358979323846, 0.0);
  }
  State s;
  s.n = 4;
  for (int i = 0; i < 4; ++i) s[i] = rng.uniform(-0.05, 0.05);
  return s;
}

State observed(const Task& t, const State& s) {
  if (t.kind == TaskKind::pendulum) {
    State o = s;
    o[0] = wrap_angle(o[0]);
    return o;
  }
  return s;
}

}  // namespace mpctune
