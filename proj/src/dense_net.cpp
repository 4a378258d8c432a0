#include "cameo/dense_net.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "cameo/error.hpp"
#include "cameo/kernels.hpp"

namespace cameo {
namespace {

void check_sizes(const std::vector<std::size_t>& sizes) {
  if (sizes.size() < 2) throw ShapeError("dense net needs at least input and output sizes");
  for (std::size_t s : sizes) {
    if (s == 0) throw ShapeError("dense net layer sizes must be positive");
  }
}

void check_input(const DenseNet& net, std::span<const double> x) {
  if (x.size() != net.input_dim()) {
    throw ShapeError("input has length " + std::to_string(x.size()) + ", net expects " +
                     std::to_string(net.input_dim()));
  }
}

// Pre-activations z[l] and activations a[l] (a[0] = x) for backprop.
struct Activations {
  std::vector<std::vector<double>> a;
  std::vector<std::vector<double>> z;
};

Activations forward_cached(const DenseNet& net, std::span<const double> x) {
  const std::size_t layers = net.num_layers();
  Activations act;
  act.a.resize(layers + 1);
  act.z.resize(layers);
  act.a[0].assign(x.begin(), x.end());
  for (std::size_t l = 0; l < layers; ++l) {
    auto& z = act.z[l];
    z.resize(net.layer_sizes()[l + 1]);
    kernels::affine(net.weights(l), net.biases(l), act.a[l], z);
    auto& out = act.a[l + 1];
    out.resize(z.size());
    if (l + 1 < layers) {
      std::transform(z.begin(), z.end(), out.begin(), [](double v) { return v > 0.0 ? v : 0.0; });
    } else if (net.output_activation() == OutputActivation::softmax) {
      softmax(z, out);
    } else {
      out = z;
    }
  }
  return act;
}

}  // namespace

DenseNet::DenseNet(std::vector<std::size_t> layer_sizes, OutputActivation output)
    : sizes_(std::move(layer_sizes)), output_(output) {
  check_sizes(sizes_);
  offsets_.resize(sizes_.size() - 1);
  std::size_t off = 0;
  for (std::size_t l = 0; l + 1 < sizes_.size(); ++l) {
    offsets_[l] = off;
    off += sizes_[l + 1] * (sizes_[l] + 1);
  }
  params_.assign(off, 0.0);
}

DenseNet DenseNet::unflatten(std::vector<std::size_t> layer_sizes, OutputActivation output,
                             std::span<const double> params) {
  DenseNet net(std::move(layer_sizes), output);
  if (params.size() != net.params_.size()) {
    throw ShapeError("parameter vector has length " + std::to_string(params.size()) +
                     ", architecture needs " + std::to_string(net.params_.size()));
  }
  std::copy(params.begin(), params.end(), net.params_.begin());
  return net;
}

std::size_t DenseNet::parameter_count(std::span<const std::size_t> layer_sizes) {
  std::size_t d = 0;
  for (std::size_t l = 0; l + 1 < layer_sizes.size(); ++l) {
    d += layer_sizes[l + 1] * (layer_sizes[l] + 1);
  }
  return d;
}

std::span<const double> DenseNet::weights(std::size_t layer) const {
  return std::span<const double>(params_).subspan(offsets_[layer],
                                                  sizes_[layer + 1] * sizes_[layer]);
}

std::span<double> DenseNet::weights(std::size_t layer) {
  return std::span<double>(params_).subspan(offsets_[layer], sizes_[layer + 1] * sizes_[layer]);
}

std::span<const double> DenseNet::biases(std::size_t layer) const {
  return std::span<const double>(params_).subspan(
      offsets_[layer] + sizes_[layer + 1] * sizes_[layer], sizes_[layer + 1]);
}

std::span<double> DenseNet::biases(std::size_t layer) {
  return std::span<double>(params_).subspan(offsets_[layer] + sizes_[layer + 1] * sizes_[layer],
                                            sizes_[layer + 1]);
}

void DenseNet::apply_gradient(std::span<const double> grad, double lr) {
  if (grad.size() != params_.size()) throw ShapeError("gradient length mismatch");
  for (std::size_t l = 0; l < num_layers(); ++l) {
    const std::size_t begin = offsets_[l];
    const std::size_t end = l + 1 < num_layers() ? offsets_[l + 1] : params_.size();
    for (std::size_t i = begin; i < end; ++i) {
      if (!std::isfinite(grad[i])) {
        throw NumericError("non-finite gradient in layer " + std::to_string(l));
      }
    }
  }
  if (lr == 0.0) return;
  kernels::axpy(-lr, grad, params_);
}

void softmax(std::span<const double> logits, std::span<double> out) {
  const double m = *std::max_element(logits.begin(), logits.end());
  double sum = 0.0;
  for (std::size_t i = 0; i < logits.size(); ++i) {
    out[i] = std::exp(logits[i] - m);
    sum += out[i];
  }
  for (double& v : out) v /= sum;
}

std::vector<double> forward(const DenseNet& net, std::span<const double> x) {
  check_input(net, x);
  std::vector<double> cur(x.begin(), x.end());
  std::vector<double> next;
  for (std::size_t l = 0; l < net.num_layers(); ++l) {
    next.resize(net.layer_sizes()[l + 1]);
    kernels::affine(net.weights(l), net.biases(l), cur, next);
    if (l + 1 < net.num_layers()) {
      for (double& v : next) v = v > 0.0 ? v : 0.0;
    } else if (net.output_activation() == OutputActivation::softmax) {
      std::vector<double> logits = next;
      softmax(logits, next);
    }
    std::swap(cur, next);
  }
  return cur;
}

double mse_loss(std::span<const double> pred, std::span<const double> target) {
  if (pred.size() != target.size()) {
    throw ShapeError("mse_loss length mismatch: " + std::to_string(pred.size()) + " vs " +
                     std::to_string(target.size()));
  }
  if (pred.empty()) throw ShapeError("mse_loss of empty vectors");
  double s = 0.0;
  for (std::size_t i = 0; i < pred.size(); ++i) {
    const double d = pred[i] - target[i];
    s += d * d;
  }
  return s / static_cast<double>(pred.size());
}

double accumulate_mse_gradient(const DenseNet& net, std::span<const double> x,
                               std::span<const double> target, double scale,
                               std::span<double> grad) {
  check_input(net, x);
  if (target.size() != net.output_dim()) throw ShapeError("target length mismatch");
  if (grad.size() != net.parameter_count()) throw ShapeError("gradient buffer length mismatch");

  const Activations act = forward_cached(net, x);
  const auto& y = act.a.back();
  const double loss = mse_loss(y, target);
  const double n = static_cast<double>(y.size());

  std::vector<double> delta(y.size());
  for (std::size_t i = 0; i < y.size(); ++i) delta[i] = 2.0 * (y[i] - target[i]) / n;
  if (net.output_activation() == OutputActivation::softmax) {
    double pg = 0.0;
    for (std::size_t i = 0; i < y.size(); ++i) pg += y[i] * delta[i];
    for (std::size_t i = 0; i < y.size(); ++i) delta[i] = y[i] * (delta[i] - pg);
  }

  for (std::size_t l = net.num_layers(); l-- > 0;) {
    const std::size_t rows = net.layer_sizes()[l + 1];
    const std::size_t cols = net.layer_sizes()[l];
    auto gw = grad.subspan(net.layer_offset(l), rows * cols);
    auto gb = grad.subspan(net.layer_offset(l) + rows * cols, rows);
    kernels::rank1_update(scale, delta, act.a[l], gw);
    kernels::axpy(scale, delta, gb);
    if (l == 0) break;
    std::vector<double> prev(cols);
    kernels::transpose_mul(net.weights(l), delta, prev);
    const auto& z = act.z[l - 1];
    for (std::size_t i = 0; i < cols; ++i) {
      if (z[i] <= 0.0) prev[i] = 0.0;
    }
    delta = std::move(prev);
  }
  return loss;
}

LossGradient mse_gradient(const DenseNet& net, std::span<const double> x,
                          std::span<const double> target) {
  LossGradient out{0.0, std::vector<double>(net.parameter_count(), 0.0)};
  out.loss = accumulate_mse_gradient(net, x, target, 1.0, out.grad);
  return out;
}

std::pair<DenseNet, double> backprop_step(const DenseNet& net, std::span<const double> x,
                                          std::span<const double> target, double lr) {
  if (!(lr >= 0.0)) throw InputError("learning rate must be non-negative");
  LossGradient lg = mse_gradient(net, x, target);
  DenseNet updated = net;
  updated.apply_gradient(lg.grad, lr);
  return {std::move(updated), lg.loss};
}

}  // namespace cameo
