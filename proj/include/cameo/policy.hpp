#pragma once

// Softmax MLP policy over discrete actions, driven by a flat parameter
// vector theta.

#include <cstddef>
#include <span>
#include <vector>

#include "cameo/dense_net.hpp"
#include "cameo/environment.hpp"
#include "cameo/random.hpp"

namespace cameo {

/// Flat vector of all policy-network weights and biases; the MCMC state.
class ParamVector {
 public:
  ParamVector() = default;
  explicit ParamVector(std::size_t dim, double value = 0.0) : values_(dim, value) {}
  explicit ParamVector(std::vector<double> values) : values_(std::move(values)) {}

  std::size_t size() const { return values_.size(); }
  double operator[](std::size_t i) const { return values_[i]; }
  double& operator[](std::size_t i) { return values_[i]; }
  std::span<const double> span() const { return values_; }
  std::span<double> span() { return values_; }
  const std::vector<double>& values() const { return values_; }
  auto begin() const { return values_.begin(); }
  auto end() const { return values_.end(); }

  bool all_finite() const;

  friend bool operator==(const ParamVector&, const ParamVector&) = default;

 private:
  std::vector<double> values_;
};

enum class Encoding { one_hot, raw };

struct PolicySpec {
  std::size_t input_dim = 0;
  std::size_t hidden = 8;
  std::size_t n_actions = 0;
  Encoding encoding = Encoding::one_hot;

  /// hidden * (input_dim + 1) + n_actions * (hidden + 1)
  std::size_t dimension() const;
  std::vector<std::size_t> layer_sizes() const { return {input_dim, hidden, n_actions}; }

  /// One-hot for tabular environments, scaled raw observation otherwise.
  static PolicySpec for_environment(const EnvSpec& env, std::size_t hidden = 8);
};

/// one_hot: basis vector e_cell of length n_states. raw: each observation
/// coordinate clamped to its bound and divided by it.
std::vector<double> encode_state(const PolicySpec& spec, const Environment& env,
                                 const EnvState& state);

/// theta unpacked into a network once, for repeated queries.
class Policy {
 public:
  Policy(const PolicySpec& spec, const ParamVector& theta);

  const PolicySpec& spec() const { return spec_; }
  std::vector<double> action_probs(std::span<const double> encoded_state) const;
  /// Stochastic by default; greedy takes the arg-max and draws nothing.
  int sample_action(std::span<const double> encoded_state, Rng& rng, bool greedy = false) const;

 private:
  PolicySpec spec_;
  DenseNet net_;
};

std::vector<double> action_probs(const PolicySpec& spec, const ParamVector& theta,
                                 std::span<const double> encoded_state);

int sample_action(const PolicySpec& spec, const ParamVector& theta,
                  std::span<const double> encoded_state, Rng& rng);

/// Index drawn from a probability vector with one uniform draw.
int sample_categorical(std::span<const double> probs, Rng& rng);

}  // namespace cameo
