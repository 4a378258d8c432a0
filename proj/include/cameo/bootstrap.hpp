#pragma once

// Trajectory bootstrap: estimating a proposal's behaviour from episodes
// collected under the current parameters, either by replaying the
// proposal policy from the stored start states (resimulate) or by
// importance-weighted TD corrections (importance_weighted).

#include <cstddef>
#include <map>
#include <optional>
#include <span>
#include <unordered_map>
#include <vector>

#include "cameo/environment.hpp"
#include "cameo/policy.hpp"
#include "cameo/trajectory.hpp"

namespace cameo {

/// rho(s) = visits to s / total visits, over every state of every trajectory.
/// Tabular environments only.
std::map<int, double> visitation_frequency(std::span<const Trajectory> trajs);

enum class CounterfactualMethod { resimulate, importance_weighted };

struct CounterfactualTrajectory {
  std::size_t source_id = 0;
  Trajectory trajectory;
  CounterfactualMethod method = CounterfactualMethod::resimulate;
  std::vector<double> importance_ratios;  // importance_weighted only
};

/// Replays `proposal` from the source trajectory's start state.
CounterfactualTrajectory resimulate(const Environment& env, const Policy& proposal,
                                    const Trajectory& source, std::size_t source_id,
                                    Rng& action_rng);

/// pi_proposal(a|s) / pi_prev(a|s) for every transition, per trajectory.
std::vector<std::vector<double>> importance_ratios(const PolicySpec& spec, const Environment& env,
                                                   const ParamVector& proposal,
                                                   const ParamVector& prev,
                                                   std::span<const Trajectory> trajs);

/// Weight of the return-to-go from step t: product of ratios t..L-1.
std::vector<std::vector<double>> tail_weights(const std::vector<std::vector<double>>& ratios);

class ValueTable {
 public:
  struct Entry {
    double value = 0.0;
    double weight = 0.0;
    std::size_t visits = 0;
  };

  /// nullopt for states never visited in the batch.
  std::optional<double> value(int cell) const;
  std::size_t visits(int cell) const;
  std::size_t size() const { return entries_.size(); }

  void add(int cell, double return_to_go, double weight);

 private:
  std::unordered_map<int, Entry> entries_;
};

/// V(s) = weighted mean of the discounted return-to-go over every visit to s
/// (terminal states are not recorded). Tabular environments only.
ValueTable value_table_from_batch(std::span<const Trajectory> trajs, double gamma,
                                  const std::vector<std::vector<double>>* weights = nullptr);

/// mixed: r + gamma V_proposal(s') - V_prev(s), as printed in the
/// derivation. single_policy: r + gamma V_prev(s') - V_prev(s).
enum class TdForm { mixed, single_policy };

struct AdvantageEstimate {
  double estimate = 0.0;             // baseline + correction
  double baseline = 0.0;             // mean batch return under prev
  double baseline_std_error = 0.0;   // of the mean batch return
  double correction = 0.0;           // mean of Pi * TD over all transitions
  double correction_std_error = 0.0;
  std::size_t transitions = 0;
  std::size_t missing_values = 0;    // unvisited states that fell back to 0
};

AdvantageEstimate is_advantage_estimate(const PolicySpec& spec, const Environment& env,
                                        const ParamVector& proposal, const ParamVector& prev,
                                        std::span<const Trajectory> trajs,
                                        const ValueTable& v_prev, const ValueTable& v_proposal,
                                        double gamma, TdForm form = TdForm::mixed);

/// Builds V_prev from the batch and V_proposal from ratio-weighted
/// returns-to-go, then calls is_advantage_estimate.
AdvantageEstimate importance_bootstrap(const PolicySpec& spec, const Environment& env,
                                       const ParamVector& proposal, const ParamVector& prev,
                                       std::span<const Trajectory> trajs, double gamma,
                                       TdForm form = TdForm::mixed);

}  // namespace cameo
