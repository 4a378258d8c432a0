#include "cameo/policy.hpp"

#include <algorithm>
#include <cmath>

#include "cameo/error.hpp"

namespace cameo {

bool ParamVector::all_finite() const {
  return std::all_of(values_.begin(), values_.end(), [](double v) { return std::isfinite(v); });
}

std::size_t PolicySpec::dimension() const {
  return hidden * (input_dim + 1) + n_actions * (hidden + 1);
}

PolicySpec PolicySpec::for_environment(const EnvSpec& env, std::size_t hidden) {
  PolicySpec spec;
  spec.hidden = hidden;
  spec.n_actions = env.n_actions;
  if (env.state_kind == StateKind::tabular) {
    spec.encoding = Encoding::one_hot;
    spec.input_dim = env.n_states;
  } else {
    spec.encoding = Encoding::raw;
    spec.input_dim = env.obs_dim;
  }
  return spec;
}

std::vector<double> encode_state(const PolicySpec& spec, const Environment& env,
                                 const EnvState& state) {
  const EnvSpec& es = env.spec();
  if (spec.encoding == Encoding::one_hot) {
    if (es.state_kind != StateKind::tabular) {
      throw EncodingError("one-hot encoding requires a tabular environment");
    }
    if (state.cell < 0 || static_cast<std::size_t>(state.cell) >= spec.input_dim) {
      throw EncodingError("tabular state " + std::to_string(state.cell) + " outside [0, " +
                          std::to_string(spec.input_dim) + ")");
    }
    std::vector<double> e(spec.input_dim, 0.0);
    e[static_cast<std::size_t>(state.cell)] = 1.0;
    return e;
  }
  if (es.state_kind != StateKind::continuous) {
    throw EncodingError("raw encoding requires a continuous environment");
  }
  std::vector<double> obs = env.observe(state);
  if (obs.size() != spec.input_dim) throw EncodingError("observation length does not match policy input");
  for (std::size_t i = 0; i < obs.size(); ++i) {
    const double b = es.obs_bounds[i];
    obs[i] = std::clamp(obs[i], -b, b) / b;
  }
  return obs;
}

Policy::Policy(const PolicySpec& spec, const ParamVector& theta)
    : spec_(spec), net_(DenseNet::unflatten(spec.layer_sizes(), OutputActivation::softmax, theta.span())) {}

std::vector<double> Policy::action_probs(std::span<const double> encoded_state) const {
  std::vector<double> p = forward(net_, encoded_state);
  for (double v : p) {
    if (!std::isfinite(v)) {
      double norm = 0.0;
      for (double w : net_.params()) norm = std::max(norm, std::abs(w));
      throw NumericError("non-finite action probabilities for theta with max |theta_j| = " +
                         std::to_string(norm));
    }
  }
  return p;
}

int sample_categorical(std::span<const double> probs, Rng& rng) {
  const double u = uniform01(rng);
  double acc = 0.0;
  for (std::size_t i = 0; i < probs.size(); ++i) {
    acc += probs[i];
    if (u < acc) return static_cast<int>(i);
  }
  // u landed in the rounding gap above the cumulative sum: take the last
  // action with non-zero mass.
  for (std::size_t i = probs.size(); i-- > 0;) {
    if (probs[i] > 0.0) return static_cast<int>(i);
  }
  return 0;
}

int Policy::sample_action(std::span<const double> encoded_state, Rng& rng, bool greedy) const {
  const std::vector<double> p = action_probs(encoded_state);
  if (greedy) return static_cast<int>(std::max_element(p.begin(), p.end()) - p.begin());
  return sample_categorical(p, rng);
}

std::vector<double> action_probs(const PolicySpec& spec, const ParamVector& theta,
                                 std::span<const double> encoded_state) {
  return Policy(spec, theta).action_probs(encoded_state);
}

int sample_action(const PolicySpec& spec, const ParamVector& theta,
                  std::span<const double> encoded_state, Rng& rng) {
  return Policy(spec, theta).sample_action(encoded_state, rng);
}

}  // namespace cameo
