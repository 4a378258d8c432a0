#pragma once

// Episodic benchmark environments: a 4x4 gridworld with one pit, the 4x12
// cliff walk, cart-pole and the two-link acrobot.
//
// Dynamics are exposed as pure functions of (state, action). Episode owns
// the mutable per-episode state, enforces the step cap and rejects steps
// after termination.

#include <array>
#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "cameo/random.hpp"

namespace cameo {

enum class StateKind { tabular, continuous };

struct EnvSpec {
  std::string name;
  StateKind state_kind = StateKind::tabular;
  std::size_t n_states = 0;         // tabular only
  std::size_t obs_dim = 0;          // length of the raw observation
  std::vector<double> obs_bounds;   // continuous only: per-coordinate scale
  std::size_t n_actions = 0;
  int episode_cap = 0;
  std::string reward_doc;
  int grid_rows = 0;                // tabular only
  int grid_cols = 0;
};

/// Environment state. Tabular environments use `cell`; continuous ones use
/// `q` (cart-pole: x, x_dot, phi, phi_dot; acrobot: q1, q2, q1_dot, q2_dot).
struct EnvState {
  int cell = -1;
  std::array<double, 4> q{};

  friend bool operator==(const EnvState&, const EnvState&) = default;
};

struct Transition {
  EnvState state;
  int action = 0;
  double reward = 0.0;
  EnvState next_state;
  bool done = false;
};

class Environment {
 public:
  virtual ~Environment() = default;
  virtual const EnvSpec& spec() const = 0;
  virtual EnvState reset(Rng& rng) const = 0;
  /// One step of the dynamics. `done` reports termination by the dynamics
  /// only; the step cap is applied by Episode.
  virtual Transition step(const EnvState& state, int action) const = 0;
  /// Raw observation: {cell} for tabular environments.
  virtual std::vector<double> observe(const EnvState& state) const = 0;
};

// ---- gridworlds ----

struct GridLayout {
  int rows = 4;
  int cols = 4;
  int start = 0;
  int goal = 15;
  std::vector<int> pits{5};
  bool pit_terminates = true;
  double step_reward = -1.0;
  double goal_reward = 10.0;
  double pit_reward = -10.0;

  static GridLayout gridworld();
  static GridLayout cliff();
  bool is_pit(int cell) const;
};

enum GridAction : int { kUp = 0, kRight = 1, kDown = 2, kLeft = 3 };

Transition grid_step(const GridLayout& layout, const EnvState& state, int action);

class GridEnvironment final : public Environment {
 public:
  GridEnvironment(std::string name, GridLayout layout, int episode_cap);
  const EnvSpec& spec() const override { return spec_; }
  const GridLayout& layout() const { return layout_; }
  EnvState reset(Rng& rng) const override;
  Transition step(const EnvState& state, int action) const override;
  std::vector<double> observe(const EnvState& state) const override;

 private:
  EnvSpec spec_;
  GridLayout layout_;
};

// ---- cart-pole ----

struct CartPoleParams {
  double gravity = 9.8;
  double cart_mass = 1.0;
  double pole_mass = 0.1;
  double half_length = 0.5;
  double force = 10.0;
  double dt = 0.02;
  double x_limit = 2.4;
  double angle_limit = 12.0 * 3.14159265358979323846 / 180.0;
};

Transition cartpole_step(const EnvState& state, int action, const CartPoleParams& p = {});

class CartPoleEnvironment final : public Environment {
 public:
  explicit CartPoleEnvironment(int episode_cap = 200);
  const EnvSpec& spec() const override { return spec_; }
  EnvState reset(Rng& rng) const override;
  Transition step(const EnvState& state, int action) const override;
  std::vector<double> observe(const EnvState& state) const override;

 private:
  EnvSpec spec_;
  CartPoleParams params_;
};

// ---- acrobot ----

struct AcrobotParams {
  double link_length1 = 1.0;
  double link_mass1 = 1.0;
  double link_mass2 = 1.0;
  double com1 = 0.5;
  double com2 = 0.5;
  double moi = 1.0;
  double gravity = 9.8;
  double dt = 0.2;
  double max_vel1 = 4.0 * 3.14159265358979323846;
  double max_vel2 = 9.0 * 3.14159265358979323846;
};

Transition acrobot_step(const EnvState& state, int action, const AcrobotParams& p = {});

class AcrobotEnvironment final : public Environment {
 public:
  explicit AcrobotEnvironment(int episode_cap = 500);
  const EnvSpec& spec() const override { return spec_; }
  EnvState reset(Rng& rng) const override;
  Transition step(const EnvState& state, int action) const override;
  std::vector<double> observe(const EnvState& state) const override;

 private:
  EnvSpec spec_;
  AcrobotParams params_;
};

// ---- factory ----

struct EnvOptions {
  std::optional<int> episode_cap;
  std::optional<std::vector<int>> pits;   // gridworld only
  bool pit_terminates = true;
};

/// gridworld | cliff | cartpole | acrobot; throws InputError otherwise.
std::unique_ptr<Environment> make_environment(const std::string& name,
                                              const EnvOptions& options = {});

// ---- episodes ----

class Episode {
 public:
  Episode(const Environment& env, EnvState start);
  /// Throws InputError once the episode is done.
  Transition step(int action);
  bool done() const { return done_; }
  /// Ended by the dynamics (goal, pit, failure) rather than the step cap.
  bool terminated() const { return terminated_; }
  int steps() const { return steps_; }
  const EnvState& state() const { return state_; }

 private:
  const Environment* env_;
  EnvState state_;
  int steps_ = 0;
  bool done_ = false;
  bool terminated_ = false;
};

}  // namespace cameo
