#include "cameo/curiosity.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "cameo/error.hpp"

namespace cameo {
namespace {

void check_states(std::span<const std::vector<double>> states, std::size_t dim) {
  if (states.size() < 2) throw InputError("curiosity loss needs a trajectory with at least 2 states");
  for (const auto& s : states) {
    if (s.size() != dim) throw ShapeError("encoded state length does not match curiosity net");
  }
}

}  // namespace

CuriosityNet::CuriosityNet(std::size_t state_dim, const CuriosityConfig& config, Rng& init_rng)
    : net_({state_dim, config.hidden, state_dim}, OutputActivation::identity), config_(config) {
  if (config.learning_rate < 0.0) throw ConfigError("curiosity learning rate must be non-negative");
  if (config.updates_per_trajectory < 0) throw ConfigError("curiosity updates must be non-negative");
  for (std::size_t l = 0; l < net_.num_layers(); ++l) {
    const double sd = std::sqrt(2.0 / static_cast<double>(net_.layer_sizes()[l]));
    fill_normal(init_rng, 0.0, sd, net_.weights(l));
  }
}

CuriosityNet::CuriosityNet(DenseNet net, const CuriosityConfig& config)
    : net_(std::move(net)), config_(config) {
  if (net_.input_dim() != net_.output_dim()) {
    throw ShapeError("curiosity net must map a state to a state of the same length");
  }
}

double CuriosityNet::trajectory_loss(std::span<const std::vector<double>> states) const {
  check_states(states, state_dim());
  double total = 0.0;
  for (std::size_t t = 0; t + 1 < states.size(); ++t) {
    total += mse_loss(forward(net_, states[t]), states[t + 1]);
  }
  if (config_.reduction == LossReduction::sum) return total;
  return total / static_cast<double>(states.size() - 1);
}

double CuriosityNet::train(std::span<const std::vector<double>> states) {
  const double before = trajectory_loss(states);
  const std::size_t pairs = states.size() - 1;
  std::vector<double> grad(net_.parameter_count());
  for (int pass = 0; pass < config_.updates_per_trajectory; ++pass) {
    std::fill(grad.begin(), grad.end(), 0.0);
    for (std::size_t t = 0; t < pairs; ++t) {
      accumulate_mse_gradient(net_, states[t], states[t + 1], 1.0 / static_cast<double>(pairs), grad);
    }
    try {
      net_.apply_gradient(grad, config_.learning_rate);
    } catch (const NumericError& e) {
      throw NumericError("curiosity training pass " + std::to_string(pass) + ": " + e.what());
    }
  }
  return before;
}

double trajectory_loss(const CuriosityNet& phi, std::span<const std::vector<double>> states) {
  return phi.trajectory_loss(states);
}

std::pair<CuriosityNet, double> train_on_trajectory(const CuriosityNet& phi,
                                                    std::span<const std::vector<double>> states) {
  CuriosityNet next = phi;
  const double loss = next.train(states);
  return {std::move(next), loss};
}

}  // namespace cameo
