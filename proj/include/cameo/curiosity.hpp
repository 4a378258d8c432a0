#pragma once

// Next-state predictor whose prediction error on a trajectory is the
// intrinsic reward. It maps an encoded state to the encoded next state,
// persists across chain iterations and is trained online.

#include <span>
#include <utility>
#include <vector>

#include "cameo/dense_net.hpp"
#include "cameo/random.hpp"

namespace cameo {

enum class LossReduction { mean, sum };

struct CuriosityConfig {
  std::size_t hidden = 150;
  double learning_rate = 1e-3;
  int updates_per_trajectory = 1;
  LossReduction reduction = LossReduction::mean;  // over consecutive state pairs
};

using EncodedStates = std::vector<std::vector<double>>;

class CuriosityNet {
 public:
  /// He-initialized weights drawn from `init_rng`, zero biases.
  CuriosityNet(std::size_t state_dim, const CuriosityConfig& config, Rng& init_rng);
  CuriosityNet(DenseNet net, const CuriosityConfig& config);

  const DenseNet& net() const { return net_; }
  const CuriosityConfig& config() const { return config_; }
  std::size_t state_dim() const { return net_.input_dim(); }

  /// Prediction error over the pairs (s_t, s_{t+1}); needs >= 2 states.
  double trajectory_loss(std::span<const std::vector<double>> states) const;

  /// updates_per_trajectory full-batch gradient steps on the mean pair
  /// loss. Returns the loss measured before the first step.
  double train(std::span<const std::vector<double>> states);

 private:
  DenseNet net_;
  CuriosityConfig config_;
};

double trajectory_loss(const CuriosityNet& phi, std::span<const std::vector<double>> states);

/// Value-returning form of CuriosityNet::train.
std::pair<CuriosityNet, double> train_on_trajectory(const CuriosityNet& phi,
                                                    std::span<const std::vector<double>> states);

}  // namespace cameo
