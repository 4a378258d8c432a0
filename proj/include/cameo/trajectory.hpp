#pragma once

#include <cstdint>
#include <vector>

#include "cameo/environment.hpp"
#include "cameo/policy.hpp"
#include "cameo/random.hpp"

namespace cameo {

/// One episode: states s_0..s_L, actions a_0..a_{L-1}, rewards r_0..r_{L-1}.
struct Trajectory {
  std::vector<EnvState> states;
  std::vector<int> actions;
  std::vector<double> rewards;
  bool terminated = false;  // ended by the dynamics rather than the step cap

  std::size_t length() const { return actions.size(); }
  const EnvState& initial_state() const { return states.front(); }

  friend bool operator==(const Trajectory&, const Trajectory&) = default;
};

/// Independent streams for the reset draw and the action draws of one
/// episode, so an episode can be replayed from its start state with the
/// same action randomness.
struct EpisodeStreams {
  Rng reset;
  Rng actions;
};

EpisodeStreams episode_streams(std::uint64_t episode_seed);

/// Runs the policy from `start` until the episode is done.
Trajectory rollout(const Environment& env, const Policy& policy, const EnvState& start,
                   Rng& action_rng, bool greedy = false);

/// reset + rollout with streams derived from `episode_seed`.
Trajectory run_episode(const Environment& env, const Policy& policy, std::uint64_t episode_seed);

/// Encoded states of a trajectory under the policy's encoding.
std::vector<std::vector<double>> encode_states(const PolicySpec& spec, const Environment& env,
                                               const Trajectory& traj);

}  // namespace cameo
