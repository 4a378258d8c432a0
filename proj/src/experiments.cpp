#include "cameo/experiments.hpp"

#include <algorithm>

#include "cameo/diagnostics.hpp"
#include "cameo/error.hpp"
#include "cameo/target.hpp"
#include "cameo/trajectory.hpp"

namespace cameo {

std::optional<int> goal_cell(const Environment& env) {
  if (const auto* grid = dynamic_cast<const GridEnvironment*>(&env)) return grid->layout().goal;
  return std::nullopt;
}

PolicyEvaluation evaluate_policy(const Environment& env, const ParamVector& theta, int episodes,
                                 std::uint64_t seed, double gamma, std::size_t hidden) {
  if (episodes < 1) throw InputError("evaluation needs at least one episode");
  const Policy policy(PolicySpec::for_environment(env.spec(), hidden), theta);
  const auto goal = goal_cell(env);
  PolicyEvaluation ev;
  ev.episodes = episodes;
  int hits = 0;
  for (int e = 0; e < episodes; ++e) {
    const Trajectory t = run_episode(env, policy, derive_seed(seed, {static_cast<std::uint64_t>(e)}));
    ev.mean_return += empirical_return(t, gamma);
    if (goal && t.states.back().cell == *goal) ++hits;
  }
  ev.mean_return /= episodes;
  ev.goal_rate = static_cast<double>(hits) / episodes;
  return ev;
}

BestRetained best_retained(std::span<const ChainRecord> chain, const Environment& env, int top,
                           int eval_episodes, std::uint64_t seed, std::size_t hidden) {
  if (chain.empty()) throw InputError("best retained state of an empty chain");
  // Distinct chain states with the best recorded mean return of each.
  std::vector<std::pair<double, const ParamVector*>> states;
  for (const ChainRecord& r : chain) {
    if (!states.empty() && *states.back().second == r.theta) {
      states.back().first = std::max(states.back().first, r.mean_return);
    } else {
      states.emplace_back(r.mean_return, &r.theta);
    }
  }
  std::stable_sort(states.begin(), states.end(),
                   [](const auto& a, const auto& b) { return a.first > b.first; });
  const std::size_t n = std::min(states.size(), static_cast<std::size_t>(std::max(top, 1)));
  BestRetained best;
  for (std::size_t i = 0; i < n; ++i) {
    const PolicyEvaluation ev = evaluate_policy(env, *states[i].second, eval_episodes, seed, 1.0, hidden);
    if (i == 0 || ev.mean_return > best.evaluation.mean_return) {
      best = {*states[i].second, states[i].first, ev};
    }
  }
  return best;
}

std::vector<ParamVector> goal_reaching_policies(std::span<const ChainRecord> chain,
                                                const Environment& env, int burn_in,
                                                int eval_episodes, std::uint64_t seed,
                                                std::size_t hidden) {
  if (!goal_cell(env)) throw UnsupportedError("goal-reaching policies need a grid environment");
  std::vector<ParamVector> out;
  for (ParamVector& theta : retained_thetas(chain, burn_in, true)) {
    if (evaluate_policy(env, theta, eval_episodes, seed, 1.0, hidden).goal_rate >= kGoalReachingRate) {
      out.push_back(std::move(theta));
    }
  }
  return out;
}

RunConfig reference_config(const std::string& env, std::uint64_t seed) {
  Settings s{{"env", env}, {"episodes", "20"}, {"seed", std::to_string(seed)}};
  if (env == "cartpole") {
    s["mode"] = "plain";
    s["iters"] = "200";
  } else if (env == "acrobot") {
    s["mode"] = "plain";
    s["iters"] = "500";
  } else {
    s["mode"] = "cameo";
    s["iters"] = "2000";
  }
  if (env == "cliff") {
    // Falling off the cliff (-10) beats wandering to the cap (-100), so the
    // chain only leaves that basin when curiosity dominates the target.
    s["temperature"] = "0.01";
    s["mu"] = "0.005";
    s["loss-reduction"] = "sum";
  }
  return resolve_config(s);
}

}  // namespace cameo
