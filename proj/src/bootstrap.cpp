#include "cameo/bootstrap.hpp"

#include <cmath>
#include <string>
#include <unordered_set>
#include <vector>

#include "cameo/error.hpp"
#include "cameo/target.hpp"

namespace cameo {
namespace {

void require_tabular(const Trajectory& t) {
  for (const EnvState& s : t.states) {
    if (s.cell < 0) throw UnsupportedError("state-indexed statistics need a tabular environment");
  }
}

double mean(std::span<const double> v) {
  double s = 0.0;
  for (double x : v) s += x;
  return s / static_cast<double>(v.size());
}

double std_error(std::span<const double> v) {
  if (v.size() < 2) return 0.0;
  const double m = mean(v);
  double ss = 0.0;
  for (double x : v) ss += (x - m) * (x - m);
  return std::sqrt(ss / static_cast<double>(v.size() - 1) / static_cast<double>(v.size()));
}

}  // namespace

std::map<int, double> visitation_frequency(std::span<const Trajectory> trajs) {
  if (trajs.empty()) throw InputError("visitation frequency of an empty batch");
  std::map<int, double> rho;
  std::size_t total = 0;
  for (const Trajectory& t : trajs) {
    require_tabular(t);
    for (const EnvState& s : t.states) {
      rho[s.cell] += 1.0;
      ++total;
    }
  }
  for (auto& [cell, v] : rho) v /= static_cast<double>(total);
  return rho;
}

CounterfactualTrajectory resimulate(const Environment& env, const Policy& proposal,
                                    const Trajectory& source, std::size_t source_id,
                                    Rng& action_rng) {
  if (source.states.empty()) throw InputError("cannot resimulate an empty trajectory");
  CounterfactualTrajectory out;
  out.source_id = source_id;
  out.method = CounterfactualMethod::resimulate;
  out.trajectory = rollout(env, proposal, source.initial_state(), action_rng);
  return out;
}

std::vector<std::vector<double>> importance_ratios(const PolicySpec& spec, const Environment& env,
                                                   const ParamVector& proposal,
                                                   const ParamVector& prev,
                                                   std::span<const Trajectory> trajs) {
  const Policy p_new(spec, proposal);
  const Policy p_old(spec, prev);
  std::vector<std::vector<double>> out;
  out.reserve(trajs.size());
  for (const Trajectory& t : trajs) {
    std::vector<double> r(t.length());
    for (std::size_t i = 0; i < t.length(); ++i) {
      const std::vector<double> x = encode_state(spec, env, t.states[i]);
      const auto a = static_cast<std::size_t>(t.actions[i]);
      const double num = p_new.action_probs(x)[a];
      const double den = p_old.action_probs(x)[a];
      if (!(den > 0.0)) throw NumericError("behaviour policy gave zero probability to a taken action");
      r[i] = num / den;
    }
    out.push_back(std::move(r));
  }
  return out;
}

std::vector<std::vector<double>> tail_weights(const std::vector<std::vector<double>>& ratios) {
  std::vector<std::vector<double>> out;
  out.reserve(ratios.size());
  for (const auto& r : ratios) {
    std::vector<double> w(r.size());
    double prod = 1.0;
    for (std::size_t t = r.size(); t-- > 0;) {
      prod *= r[t];
      w[t] = prod;
    }
    out.push_back(std::move(w));
  }
  return out;
}

std::optional<double> ValueTable::value(int cell) const {
  auto it = entries_.find(cell);
  if (it == entries_.end() || !(it->second.weight > 0.0)) return std::nullopt;
  return it->second.value;
}

std::size_t ValueTable::visits(int cell) const {
  auto it = entries_.find(cell);
  return it == entries_.end() ? 0 : it->second.visits;
}

void ValueTable::add(int cell, double return_to_go, double weight) {
  Entry& e = entries_[cell];
  e.visits += 1;
  if (!(weight > 0.0)) return;
  e.weight += weight;
  e.value += weight / e.weight * (return_to_go - e.value);
}

ValueTable value_table_from_batch(std::span<const Trajectory> trajs, double gamma,
                                  const std::vector<std::vector<double>>* weights) {
  if (weights != nullptr && weights->size() != trajs.size()) {
    throw ShapeError("value-table weights do not match the batch");
  }
  ValueTable table;
  for (std::size_t i = 0; i < trajs.size(); ++i) {
    const Trajectory& t = trajs[i];
    require_tabular(t);
    if (weights != nullptr && (*weights)[i].size() != t.length()) {
      throw ShapeError("value-table weights do not match trajectory " + std::to_string(i));
    }
    // First visit to each cell only: later visits have less of the episode
    // left, so mixing them in skews the value toward the step cap.
    std::vector<double> to_go(t.length());
    double g = 0.0;
    for (std::size_t s = t.length(); s-- > 0;) {
      g = t.rewards[s] + gamma * g;
      to_go[s] = g;
    }
    std::unordered_set<int> seen;
    for (std::size_t s = 0; s < t.length(); ++s) {
      if (seen.insert(t.states[s].cell).second) {
        table.add(t.states[s].cell, to_go[s], weights != nullptr ? (*weights)[i][s] : 1.0);
      }
    }
  }
  return table;
}

AdvantageEstimate is_advantage_estimate(const PolicySpec& spec, const Environment& env,
                                        const ParamVector& proposal, const ParamVector& prev,
                                        std::span<const Trajectory> trajs,
                                        const ValueTable& v_prev, const ValueTable& v_proposal,
                                        double gamma, TdForm form) {
  if (trajs.empty()) throw InputError("advantage estimate needs at least one trajectory");
  AdvantageEstimate est;
  std::vector<double> returns;
  returns.reserve(trajs.size());
  for (const Trajectory& t : trajs) returns.push_back(empirical_return(t, gamma));
  est.baseline = mean(returns);
  est.baseline_std_error = std_error(returns);

  const auto ratios = importance_ratios(spec, env, proposal, prev, trajs);
  const ValueTable& v_next = form == TdForm::mixed ? v_proposal : v_prev;
  auto lookup = [&est](const ValueTable& v, int cell) {
    if (auto x = v.value(cell)) return *x;
    ++est.missing_values;
    return 0.0;
  };

  std::vector<double> terms;
  for (std::size_t i = 0; i < trajs.size(); ++i) {
    const Trajectory& t = trajs[i];
    for (std::size_t s = 0; s < t.length(); ++s) {
      // Nothing accrues past the end of an episode, step cap included.
      const bool last = s + 1 == t.length();
      const double v_next_val = last ? 0.0 : lookup(v_next, t.states[s + 1].cell);
      const double td = t.rewards[s] + gamma * v_next_val - lookup(v_prev, t.states[s].cell);
      terms.push_back(ratios[i][s] * td);
    }
  }
  est.transitions = terms.size();
  if (!terms.empty()) {
    est.correction = mean(terms);
    est.correction_std_error = std_error(terms);
  }
  est.estimate = est.baseline + est.correction;
  return est;
}

AdvantageEstimate importance_bootstrap(const PolicySpec& spec, const Environment& env,
                                       const ParamVector& proposal, const ParamVector& prev,
                                       std::span<const Trajectory> trajs, double gamma,
                                       TdForm form) {
  const ValueTable v_prev = value_table_from_batch(trajs, gamma);
  const auto weights = tail_weights(importance_ratios(spec, env, proposal, prev, trajs));
  const ValueTable v_prop = value_table_from_batch(trajs, gamma, &weights);
  return is_advantage_estimate(spec, env, proposal, prev, trajs, v_prev, v_prop, gamma, form);
}

}  // namespace cameo
