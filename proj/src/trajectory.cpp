#include "cameo/trajectory.hpp"

namespace cameo {

EpisodeStreams episode_streams(std::uint64_t episode_seed) {
  return {make_rng(episode_seed, {0}), make_rng(episode_seed, {1})};
}

Trajectory rollout(const Environment& env, const Policy& policy, const EnvState& start,
                   Rng& action_rng, bool greedy) {
  Trajectory traj;
  traj.states.push_back(start);
  Episode episode(env, start);
  const auto cap = static_cast<std::size_t>(env.spec().episode_cap);
  traj.actions.reserve(cap);
  traj.rewards.reserve(cap);
  while (!episode.done()) {
    const std::vector<double> x = encode_state(policy.spec(), env, episode.state());
    const int a = policy.sample_action(x, action_rng, greedy);
    const Transition t = episode.step(a);
    traj.actions.push_back(a);
    traj.rewards.push_back(t.reward);
    traj.states.push_back(t.next_state);
  }
  traj.terminated = episode.terminated();
  return traj;
}

Trajectory run_episode(const Environment& env, const Policy& policy, std::uint64_t episode_seed) {
  EpisodeStreams streams = episode_streams(episode_seed);
  const EnvState start = env.reset(streams.reset);
  return rollout(env, policy, start, streams.actions);
}

std::vector<std::vector<double>> encode_states(const PolicySpec& spec, const Environment& env,
                                               const Trajectory& traj) {
  std::vector<std::vector<double>> out;
  out.reserve(traj.states.size());
  for (const EnvState& s : traj.states) out.push_back(encode_state(spec, env, s));
  return out;
}

}  // namespace cameo
