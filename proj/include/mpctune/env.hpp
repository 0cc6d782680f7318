#pragma once

#include <array>
#include <cmath>
#include <string>

#include "mpctune/errors.hpp"
#include "mpctune/rng.hpp"

namespace mpctune {

enum class TaskKind { pendulum, cartpole };

std::string task_name(TaskKind kind);
TaskKind task_from_name(const std::string& name);

// Fixed-capacity state vector. Pendulum uses (theta, omega) with theta
// measured from upright; cartpole uses (x, x_dot, theta, theta_dot) with
// theta measured from upright.
struct State {
  std::array<double, 4> v{};
  int n = 0;

  double operator[](int i) const { return v[static_cast<std::size_t>(i)]; }
  double& operator[](int i) { return v[static_cast<std::size_t>(i)]; }

  bool finite() const {
    for (int i = 0; i < n; ++i) {
      if (!std::isfinite(v[static_cast<std::size_t>(i)])) return false;
    }
    return true;
  }

  static State of2(double a, double b) {
    State s;
    s.n = 2;
    s.v = {a, b, 0.0, 0.0};
    return s;
  }
  static State of4(double a, double b, double c, double d) {
    State s;
    s.n = 4;
    s.v = {a, b, c, d};
    return s;
  }
};

// Concrete sampled values of the randomized dynamics parameters. For the
// pendulum these are bob mass and rod length; for the cartpole, pole mass and
// pole half-length (distance from pivot to the pole's center of mass).
struct PhysicalParams {
  double mass = 1.0;
  double length = 1.0;

  bool positive() const { return mass > 0.0 && length > 0.0; }
};

// Immutable task description: dynamics constants that are not randomized.
struct Task {
  TaskKind kind = TaskKind::pendulum;
  double dt = 0.05;
  double action_limit = 2.0;  // N*m (pendulum) or N (cartpole)
  double gravity = 9.81;
  double cart_mass = 1.0;   // cartpole only
  double track_limit = 2.4;  // cartpole only, m

  int state_dim() const { return kind == TaskKind::pendulum ? 2 : 4; }

  double clip_action(double a) const {
    if (a > action_limit) return action_limit;
    if (a < -action_limit) return -action_limit;
    return a;
  }

  static Task pendulum() {
    Task t;
    t.kind = TaskKind::pendulum;
    t.action_limit = 2.0;
    return t;
  }

  static Task cartpole() {
    Task t;
    t.kind = TaskKind::cartpole;
    t.action_limit = 10.0;
    return t;
  }
};

// Wrap to (-pi, pi].
inline double wrap_angle(double a) {
  constexpr double kPi = 3.14159265358979323846;
  constexpr double kTwoPi = 2.0 * kPi;
  a = std::fmod(a, kTwoPi);
  if (a <= -kPi) a += kTwoPi;
  if (a > kPi) a -= kTwoPi;
  return a;
}

namespace detail {

inline State pendulum_deriv(const State& s, double a, const PhysicalParams& p, double g) {
  // m l^2 theta_dd = m g l sin(theta) + a, theta measured from upright
  const double theta = s[0];
  const double omega = s[1];
  const double ml2 = p.mass * p.length * p.length;
  return State::of2(omega, (g / p.length) * std::sin(theta) + a / ml2);
}

inline State cartpole_deriv(const State& s, double f, const PhysicalParams& p, double g,
                            double cart_mass) {
  // Pole-on-cart with a uniform-density pole; p.length is the half-length.
  const double theta = s[2];
  const double theta_dot = s[3];
  const double sin_t = std::sin(theta);
  const double cos_t = std::cos(theta);
  const double total_mass = cart_mass + p.mass;
  const double pml = p.mass * p.length;
  const double temp = (f + pml * theta_dot * theta_dot * sin_t) / total_mass;
  const double theta_dd =
      (g * sin_t - cos_t * temp) /
      (p.length * (4.0 / 3.0 - p.mass * cos_t * cos_t / total_mass));
  const double x_dd = temp - pml * theta_dd * cos_t / total_mass;
  return State::of4(s[1], x_dd, theta_dot, theta_dd);
}

inline State deriv(const Task& t, const State& s, double a, const PhysicalParams& p) {
  return t.kind == TaskKind::pendulum ? pendulum_deriv(s, a, p, t.gravity)
                                      : cartpole_deriv(s, a, p, t.gravity, t.cart_mass);
}

inline State axpy(const State& s, const State& d, double h) {
  State out = s;
  for (int i = 0; i < s.n; ++i) out[i] = s[i] + h * d[i];
  return out;
}

}  // namespace detail

// Fixed-step RK4 integration over one interval dt; the action is held
// constant. Pure function of its arguments.
inline State rk4_step(const Task& t, const State& s, double a, const PhysicalParams& p,
                      double dt) {
  const State k1 = detail::deriv(t, s, a, p);
  const State k2 = detail::deriv(t, detail::axpy(s, k1, 0.5 * dt), a, p);
  const State k3 = detail::deriv(t, detail::axpy(s, k2, 0.5 * dt), a, p);
  const State k4 = detail::deriv(t, detail::axpy(s, k3, dt), a, p);
  State out = s;
  for (int i = 0; i < s.n; ++i) {
    out[i] = s[i] + dt / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
  }
  return out;
}

// Validated single transition step. Throws NumericError on non-finite input.
State step(const Task& t, const State& s, double action, const PhysicalParams& p, double dt);

// Dense instantaneous reward. Angles are wrapped internally, so the value is
// invariant to adding multiples of 2*pi to theta.
inline double reward(const Task& t, const State& s, double action) {
  if (t.kind == TaskKind::pendulum) {
    const double th = wrap_angle(s[0]);
    return -(th * th + 0.1 * s[1] * s[1] + 0.001 * action * action);
  }
  const double x = s[0];
  const double th = wrap_angle(s[2]);
  double r = -(x * x + th * th + 0.01 * s[1] * s[1] + 0.01 * s[3] * s[3] +
               0.001 * action * action);
  if (std::abs(x) > t.track_limit) r -= 100.0;
  return r;
}

// Pendulum starts hanging down; cartpole starts near upright with a uniform
// (-0.05, 0.05) perturbation on every component.
State initial_state(const Task& t, Rng& rng);

// Wrap the pendulum angle for observation; cartpole states pass through.
State observed(const Task& t, const State& s);

// Total mechanical energy of the pendulum (zero potential at the pivot).
inline double pendulum_energy(const State& s, const PhysicalParams& p, double g) {
  return 0.5 * p.mass * p.length * p.length * s[1] * s[1] +
         p.mass * g * p.length * std::cos(s[0]);
}

}  // namespace mpctune
