#pragma once

// Minimal dense feed-forward network: ReLU hidden layers, identity or
// softmax output, MSE loss and plain gradient descent.
//
// Parameters live in one flat buffer in the canonical order: layer-major,
// weights before biases within a layer, weight matrices row-major with
// shape (layer_sizes[i+1], layer_sizes[i]). flatten() is therefore a copy
// of that buffer and gradients share the same layout.

#include <cstddef>
#include <span>
#include <utility>
#include <vector>

namespace cameo {

enum class OutputActivation { identity, softmax };

class DenseNet {
 public:
  DenseNet() = default;

  /// All-zero parameters.
  DenseNet(std::vector<std::size_t> layer_sizes, OutputActivation output);

  static DenseNet unflatten(std::vector<std::size_t> layer_sizes, OutputActivation output,
                            std::span<const double> params);

  static std::size_t parameter_count(std::span<const std::size_t> layer_sizes);

  std::vector<double> flatten() const { return params_; }
  std::span<const double> params() const { return params_; }
  std::span<double> params() { return params_; }
  std::size_t parameter_count() const { return params_.size(); }

  const std::vector<std::size_t>& layer_sizes() const { return sizes_; }
  std::size_t input_dim() const { return sizes_.front(); }
  std::size_t output_dim() const { return sizes_.back(); }
  std::size_t num_layers() const { return sizes_.size() - 1; }
  OutputActivation output_activation() const { return output_; }

  std::span<const double> weights(std::size_t layer) const;
  std::span<double> weights(std::size_t layer);
  std::span<const double> biases(std::size_t layer) const;
  std::span<double> biases(std::size_t layer);

  /// Offset of layer `layer`'s weights inside the flat buffer.
  std::size_t layer_offset(std::size_t layer) const { return offsets_[layer]; }

  /// params -= lr * grad. Throws NumericError naming the first layer whose
  /// gradient is not finite; the net is left untouched in that case.
  void apply_gradient(std::span<const double> grad, double lr);

  friend bool operator==(const DenseNet&, const DenseNet&) = default;

 private:
  std::vector<std::size_t> sizes_;
  std::vector<std::size_t> offsets_;
  OutputActivation output_ = OutputActivation::identity;
  std::vector<double> params_;
};

std::vector<double> forward(const DenseNet& net, std::span<const double> x);

double mse_loss(std::span<const double> pred, std::span<const double> target);

/// Adds scale * dL/dparams of mse_loss(forward(net, x), target) into grad
/// (same layout as the flat parameters) and returns the loss.
double accumulate_mse_gradient(const DenseNet& net, std::span<const double> x,
                               std::span<const double> target, double scale,
                               std::span<double> grad);

struct LossGradient {
  double loss;
  std::vector<double> grad;
};

LossGradient mse_gradient(const DenseNet& net, std::span<const double> x,
                          std::span<const double> target);

/// One gradient-descent step on the MSE. Returns the updated copy and the
/// loss measured before the update.
std::pair<DenseNet, double> backprop_step(const DenseNet& net, std::span<const double> x,
                                          std::span<const double> target, double lr);

/// Numerically stable softmax, written into `out`.
void softmax(std::span<const double> logits, std::span<double> out);

}  // namespace cameo
