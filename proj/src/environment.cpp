#include "cameo/environment.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "cameo/error.hpp"

namespace cameo {

// ---- gridworlds ----

GridLayout GridLayout::gridworld() { return GridLayout{}; }

GridLayout GridLayout::cliff() {
  GridLayout g;
  g.rows = 4;
  g.cols = 12;
  g.start = 36;
  g.goal = 47;
  g.pits.clear();
  for (int c = 37; c <= 46; ++c) g.pits.push_back(c);
  return g;
}

bool GridLayout::is_pit(int cell) const {
  return std::find(pits.begin(), pits.end(), cell) != pits.end();
}

Transition grid_step(const GridLayout& layout, const EnvState& state, int action) {
  const int n = layout.rows * layout.cols;
  const int cell = state.cell;
  if (cell < 0 || cell >= n || cell == layout.goal || (layout.is_pit(cell) && layout.pit_terminates)) {
    throw InputError("grid state " + std::to_string(cell) + " is not a live cell");
  }
  if (action < 0 || action > 3) throw InputError("grid action " + std::to_string(action) + " out of range");

  int r = cell / layout.cols;
  int c = cell % layout.cols;
  switch (action) {
    case kUp: r = std::max(r - 1, 0); break;
    case kRight: c = std::min(c + 1, layout.cols - 1); break;
    case kDown: r = std::min(r + 1, layout.rows - 1); break;
    case kLeft: c = std::max(c - 1, 0); break;
  }
  Transition t;
  t.state = state;
  t.action = action;
  t.next_state.cell = r * layout.cols + c;
  if (t.next_state.cell == layout.goal) {
    t.reward = layout.goal_reward;
    t.done = true;
  } else if (layout.is_pit(t.next_state.cell)) {
    t.reward = layout.pit_reward;
    if (layout.pit_terminates) {
      t.done = true;
    } else {
      t.next_state.cell = layout.start;
    }
  } else {
    t.reward = layout.step_reward;
  }
  return t;
}

GridEnvironment::GridEnvironment(std::string name, GridLayout layout, int episode_cap)
    : layout_(std::move(layout)) {
  const int n = layout_.rows * layout_.cols;
  auto in_range = [n](int c) { return c >= 0 && c < n; };
  if (!in_range(layout_.start) || !in_range(layout_.goal) || layout_.start == layout_.goal ||
      layout_.is_pit(layout_.start) || layout_.is_pit(layout_.goal) ||
      !std::all_of(layout_.pits.begin(), layout_.pits.end(), in_range)) {
    throw InputError("invalid grid layout for " + name);
  }
  if (episode_cap <= 0) throw InputError("episode cap must be positive");
  spec_.name = std::move(name);
  spec_.state_kind = StateKind::tabular;
  spec_.n_states = static_cast<std::size_t>(n);
  spec_.obs_dim = 1;
  spec_.n_actions = 4;
  spec_.episode_cap = episode_cap;
  spec_.reward_doc = "-1 per move, 10 for the goal and -10 for the pit";
  spec_.grid_rows = layout_.rows;
  spec_.grid_cols = layout_.cols;
}

EnvState GridEnvironment::reset(Rng&) const {
  EnvState s;
  s.cell = layout_.start;
  return s;
}

Transition GridEnvironment::step(const EnvState& state, int action) const {
  return grid_step(layout_, state, action);
}

std::vector<double> GridEnvironment::observe(const EnvState& state) const {
  return {static_cast<double>(state.cell)};
}

// ---- cart-pole ----

Transition cartpole_step(const EnvState& state, int action, const CartPoleParams& p) {
  if (action != 0 && action != 1) throw InputError("cart-pole action " + std::to_string(action) + " out of range");
  const double x = state.q[0];
  const double x_dot = state.q[1];
  const double phi = state.q[2];
  const double phi_dot = state.q[3];

  const double total_mass = p.cart_mass + p.pole_mass;
  const double pole_mass_length = p.pole_mass * p.half_length;
  const double force = action == 1 ? p.force : -p.force;
  const double cos_phi = std::cos(phi);
  const double sin_phi = std::sin(phi);

  const double temp = (force + pole_mass_length * phi_dot * phi_dot * sin_phi) / total_mass;
  const double phi_acc = (p.gravity * sin_phi - cos_phi * temp) /
                         (p.half_length * (4.0 / 3.0 - p.pole_mass * cos_phi * cos_phi / total_mass));
  const double x_acc = temp - pole_mass_length * phi_acc * cos_phi / total_mass;

  Transition t;
  t.state = state;
  t.action = action;
  // semi-implicit Euler: velocities first, positions from the new velocities
  const double nx_dot = x_dot + p.dt * x_acc;
  const double nphi_dot = phi_dot + p.dt * phi_acc;
  t.next_state.q = {x + p.dt * nx_dot, nx_dot, phi + p.dt * nphi_dot, nphi_dot};
  t.reward = 1.0;
  t.done = std::abs(t.next_state.q[0]) > p.x_limit || std::abs(t.next_state.q[2]) > p.angle_limit;
  return t;
}

CartPoleEnvironment::CartPoleEnvironment(int episode_cap) {
  if (episode_cap <= 0) throw InputError("episode cap must be positive");
  spec_.name = "cartpole";
  spec_.state_kind = StateKind::continuous;
  spec_.obs_dim = 4;
  spec_.obs_bounds = {params_.x_limit, 3.0, params_.angle_limit, 3.5};
  spec_.n_actions = 2;
  spec_.episode_cap = episode_cap;
  spec_.reward_doc = "+1 per time step";
}

EnvState CartPoleEnvironment::reset(Rng& rng) const {
  std::uniform_real_distribution<double> u(-0.05, 0.05);
  EnvState s;
  for (double& v : s.q) v = u(rng);
  return s;
}

Transition CartPoleEnvironment::step(const EnvState& state, int action) const {
  return cartpole_step(state, action, params_);
}

std::vector<double> CartPoleEnvironment::observe(const EnvState& state) const {
  return {state.q.begin(), state.q.end()};
}

// ---- acrobot ----

namespace {

using State4 = std::array<double, 4>;

State4 acrobot_derivs(const State4& s, double torque, const AcrobotParams& p) {
  const double m1 = p.link_mass1, m2 = p.link_mass2;
  const double l1 = p.link_length1, lc1 = p.com1, lc2 = p.com2;
  const double i1 = p.moi, i2 = p.moi, g = p.gravity;
  const double q1 = s[0], q2 = s[1], dq1 = s[2], dq2 = s[3];
  const double d1 = m1 * lc1 * lc1 + m2 * (l1 * l1 + lc2 * lc2 + 2.0 * l1 * lc2 * std::cos(q2)) + i1 + i2;
  const double d2 = m2 * (lc2 * lc2 + l1 * lc2 * std::cos(q2)) + i2;
  const double phi2 = m2 * lc2 * g * std::cos(q1 + q2 - std::numbers::pi / 2.0);
  const double phi1 = -m2 * l1 * lc2 * dq2 * dq2 * std::sin(q2) -
                      2.0 * m2 * l1 * lc2 * dq2 * dq1 * std::sin(q2) +
                      (m1 * lc1 + m2 * l1) * g * std::cos(q1 - std::numbers::pi / 2.0) + phi2;
  const double ddq2 = (torque + d2 / d1 * phi1 - m2 * l1 * lc2 * dq1 * dq1 * std::sin(q2) - phi2) /
                      (m2 * lc2 * lc2 + i2 - d2 * d2 / d1);
  const double ddq1 = -(d2 * ddq2 + phi1) / d1;
  return {dq1, dq2, ddq1, ddq2};
}

State4 axpy4(const State4& a, double h, const State4& b) {
  return {a[0] + h * b[0], a[1] + h * b[1], a[2] + h * b[2], a[3] + h * b[3]};
}

double wrap_angle(double x) {
  const double two_pi = 2.0 * std::numbers::pi;
  while (x > std::numbers::pi) x -= two_pi;
  while (x < -std::numbers::pi) x += two_pi;
  return x;
}

}  // namespace

Transition acrobot_step(const EnvState& state, int action, const AcrobotParams& p) {
  if (action < 0 || action > 2) throw InputError("acrobot action " + std::to_string(action) + " out of range");
  const double torque = static_cast<double>(action) - 1.0;
  const State4 s = state.q;
  const double h = p.dt;
  const State4 k1 = acrobot_derivs(s, torque, p);
  const State4 k2 = acrobot_derivs(axpy4(s, h / 2.0, k1), torque, p);
  const State4 k3 = acrobot_derivs(axpy4(s, h / 2.0, k2), torque, p);
  const State4 k4 = acrobot_derivs(axpy4(s, h, k3), torque, p);
  State4 ns;
  for (int i = 0; i < 4; ++i) ns[i] = s[i] + h / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
  ns[0] = wrap_angle(ns[0]);
  ns[1] = wrap_angle(ns[1]);
  ns[2] = std::clamp(ns[2], -p.max_vel1, p.max_vel1);
  ns[3] = std::clamp(ns[3], -p.max_vel2, p.max_vel2);

  Transition t;
  t.state = state;
  t.action = action;
  t.next_state.q = ns;
  t.reward = -1.0;
  t.done = -std::cos(ns[0]) - std::cos(ns[0] + ns[1]) > 1.0;
  return t;
}

AcrobotEnvironment::AcrobotEnvironment(int episode_cap) {
  if (episode_cap <= 0) throw InputError("episode cap must be positive");
  spec_.name = "acrobot";
  spec_.state_kind = StateKind::continuous;
  spec_.obs_dim = 6;
  spec_.obs_bounds = {1.0, 1.0, 1.0, 1.0, params_.max_vel1, params_.max_vel2};
  spec_.n_actions = 3;
  spec_.episode_cap = episode_cap;
  spec_.reward_doc = "-1 per time step";
}

EnvState AcrobotEnvironment::reset(Rng& rng) const {
  std::uniform_real_distribution<double> u(-0.1, 0.1);
  EnvState s;
  for (double& v : s.q) v = u(rng);
  return s;
}

Transition AcrobotEnvironment::step(const EnvState& state, int action) const {
  return acrobot_step(state, action, params_);
}

std::vector<double> AcrobotEnvironment::observe(const EnvState& state) const {
  const auto& q = state.q;
  return {std::cos(q[0]), std::sin(q[0]), std::cos(q[1]), std::sin(q[1]), q[2], q[3]};
}

// ---- factory ----

std::unique_ptr<Environment> make_environment(const std::string& name, const EnvOptions& options) {
  if (name == "gridworld" || name == "cliff") {
    GridLayout layout = name == "gridworld" ? GridLayout::gridworld() : GridLayout::cliff();
    if (options.pits) layout.pits = *options.pits;
    layout.pit_terminates = options.pit_terminates;
    const int cap = options.episode_cap.value_or(name == "gridworld" ? 50 : 100);
    return std::make_unique<GridEnvironment>(name, std::move(layout), cap);
  }
  if (name == "cartpole") return std::make_unique<CartPoleEnvironment>(options.episode_cap.value_or(200));
  if (name == "acrobot") return std::make_unique<AcrobotEnvironment>(options.episode_cap.value_or(500));
  throw InputError("unknown environment '" + name + "' (expected gridworld | cliff | cartpole | acrobot)");
}

// ---- episodes ----

Episode::Episode(const Environment& env, EnvState start) : env_(&env), state_(start) {}

Transition Episode::step(int action) {
  if (done_) throw InputError("step on a finished episode");
  Transition t = env_->step(state_, action);
  ++steps_;
  terminated_ = t.done;
  if (steps_ >= env_->spec().episode_cap) t.done = true;
  done_ = t.done;
  state_ = t.next_state;
  return t;
}

}  // namespace cameo
