#pragma once

// Helpers shared by the CLI and the acceptance suite: fresh evaluation of
// sampled policies and the reference experiment settings.

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "cameo/config.hpp"
#include "cameo/environment.hpp"
#include "cameo/sampler.hpp"

namespace cameo {

/// Goal cell of a grid environment, nullopt otherwise.
std::optional<int> goal_cell(const Environment& env);

struct PolicyEvaluation {
  double mean_return = 0.0;
  double goal_rate = 0.0;  // fraction of episodes ending on the goal; 0 off-grid
  int episodes = 0;
};

/// Fresh stochastic rollouts; episode e uses derive_seed(seed, {e}).
PolicyEvaluation evaluate_policy(const Environment& env, const ParamVector& theta, int episodes,
                                 std::uint64_t seed, double gamma = 1.0, std::size_t hidden = 8);

struct BestRetained {
  ParamVector theta;
  double chain_mean_return = 0.0;
  PolicyEvaluation evaluation;
};

/// Takes the `top` distinct retained states with the highest recorded mean
/// return, re-evaluates each on fresh episodes and returns the best.
BestRetained best_retained(std::span<const ChainRecord> chain, const Environment& env, int top,
                           int eval_episodes, std::uint64_t seed, std::size_t hidden = 8);

/// A policy is goal-reaching when at least half of its fresh evaluation
/// episodes end on the goal.
inline constexpr double kGoalReachingRate = 0.5;

/// Distinct retained states after burn-in that are goal-reaching.
std::vector<ParamVector> goal_reaching_policies(std::span<const ChainRecord> chain,
                                                const Environment& env, int burn_in,
                                                int eval_episodes, std::uint64_t seed,
                                                std::size_t hidden = 8);

/// Reference settings: plain Metropolis for cartpole (K=200) and acrobot
/// (K=500), CAMEO for gridworld and cliff (K=2000); N=20 throughout. Cliff
/// runs curiosity-dominated (T=0.01, mu=0.005, summed curiosity loss).
RunConfig reference_config(const std::string& env, std::uint64_t seed);

}  // namespace cameo
