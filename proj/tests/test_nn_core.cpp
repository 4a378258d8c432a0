#include "doctest.h"

#include <cmath>
#include <random>
#include <vector>

#include "cameo/dense_net.hpp"
#include "cameo/error.hpp"
#include "cameo/random.hpp"

using namespace cameo;

namespace {

DenseNet random_net(std::vector<std::size_t> sizes, OutputActivation out, Rng& rng, double sd = 0.7) {
  DenseNet net(std::move(sizes), out);
  fill_normal(rng, 0.0, sd, net.params());
  return net;
}

// Plain loop forward pass used as an oracle; deliberately shares no code
// with the library.
std::vector<double> naive_forward(const DenseNet& net, std::vector<double> x) {
  const auto& s = net.layer_sizes();
  std::size_t off = 0;
  const auto p = net.params();
  for (std::size_t l = 0; l + 1 < s.size(); ++l) {
    std::vector<double> y(s[l + 1]);
    for (std::size_t r = 0; r < s[l + 1]; ++r) {
      double acc = 0.0;
      for (std::size_t c = 0; c < s[l]; ++c) acc += p[off + r * s[l] + c] * x[c];
      y[r] = acc + p[off + s[l + 1] * s[l] + r];
    }
    off += s[l + 1] * (s[l] + 1);
    if (l + 2 < s.size()) {
      for (double& v : y) v = v > 0.0 ? v : 0.0;
    } else if (net.output_activation() == OutputActivation::softmax) {
      double m = y[0];
      for (double v : y) m = std::max(m, v);
      double z = 0.0;
      for (double& v : y) z += (v = std::exp(v - m));
      for (double& v : y) v /= z;
    }
    x = y;
  }
  return x;
}

double loss_at(const DenseNet& net, const std::vector<double>& x, const std::vector<double>& t) {
  const auto y = forward(net, x);
  return mse_loss(y, t);
}

}  // namespace

TEST_CASE("parameter count and layout") {
  DenseNet net({3, 5, 2}, OutputActivation::identity);
  CHECK(net.parameter_count() == 5 * 4 + 2 * 6);
  const std::vector<std::size_t> sizes{16, 8, 4};
  CHECK(DenseNet::parameter_count(sizes) == 8 * 17 + 4 * 9);
  CHECK(net.weights(0).size() == 15);
  CHECK(net.biases(0).size() == 5);
  CHECK(net.weights(1).size() == 10);
  CHECK(net.biases(1).size() == 2);
  CHECK(net.layer_offset(1) == 20);
}

TEST_CASE("zero net outputs") {
  DenseNet id({3, 4, 2}, OutputActivation::identity);
  const std::vector<double> x{0.3, -2.0, 7.0};
  for (double v : forward(id, x)) CHECK(v == 0.0);
  DenseNet sm({3, 4, 5}, OutputActivation::softmax);
  for (double v : forward(sm, x)) CHECK(v == doctest::Approx(0.2).epsilon(1e-15));
}

TEST_CASE("hand-computed 1-2-1 net") {
  // W1 = [1, -1]^T, b1 = [0, 0.5], W2 = [2, 3], b2 = 0.1
  const std::vector<double> p{1.0, -1.0, 0.0, 0.5, 2.0, 3.0, 0.1};
  auto net = DenseNet::unflatten({1, 2, 1}, OutputActivation::identity, p);
  // x = 0.5: h = relu(0.5, 0) = (0.5, 0), y = 1.0 + 0.1
  CHECK(forward(net, std::vector<double>{0.5})[0] == doctest::Approx(1.1).epsilon(1e-15));
  // x = -1: h = relu(-1, 1.5) = (0, 1.5), y = 4.5 + 0.1
  CHECK(forward(net, std::vector<double>{-1.0})[0] == doctest::Approx(4.6).epsilon(1e-15));
}

TEST_CASE("forward matches a naive loop and is deterministic") {
  Rng rng(11);
  for (int trial = 0; trial < 10; ++trial) {
    auto out = trial % 2 ? OutputActivation::softmax : OutputActivation::identity;
    auto net = random_net({6, 9, 4}, out, rng);
    std::vector<double> x(6);
    fill_normal(rng, 0.0, 1.0, x);
    const auto a = forward(net, x);
    const auto b = forward(net, x);
    CHECK(a == b);
    const auto o = naive_forward(net, x);
    for (std::size_t i = 0; i < a.size(); ++i) CHECK(a[i] == doctest::Approx(o[i]).epsilon(1e-12));
    if (out == OutputActivation::softmax) {
      double s = 0.0;
      for (double v : a) s += v;
      CHECK(std::abs(s - 1.0) < 1e-9);
    }
  }
}

TEST_CASE("input shape errors") {
  DenseNet net({3, 2, 1}, OutputActivation::identity);
  CHECK_THROWS_AS(forward(net, std::vector<double>{1.0, 2.0}), ShapeError);
  CHECK_THROWS_AS(mse_loss(std::vector<double>{1.0}, std::vector<double>{1.0, 2.0}), ShapeError);
}

TEST_CASE("mse loss") {
  const std::vector<double> a{1.0, 0.0};
  const std::vector<double> z{0.0, 0.0};
  CHECK(mse_loss(a, a) == 0.0);
  CHECK(mse_loss(a, z) == 0.5);
  Rng rng(5);
  std::vector<double> p(5), t(5);
  fill_normal(rng, 0.0, 1.0, p);
  fill_normal(rng, 0.0, 1.0, t);
  double oracle = 0.0;
  for (int i = 0; i < 5; ++i) oracle += (p[i] - t[i]) * (p[i] - t[i]);
  oracle /= 5.0;
  CHECK(mse_loss(p, t) == doctest::Approx(oracle).epsilon(1e-14));
}

TEST_CASE("single linear neuron step") {
  DenseNet net({1, 1}, OutputActivation::identity);  // w = 0, b = 0
  const std::vector<double> x{1.0}, t{1.0};
  auto [next, loss] = backprop_step(net, x, t, 0.1);
  CHECK(loss == 1.0);
  CHECK(next.weights(0)[0] == doctest::Approx(0.2).epsilon(1e-15));
  CHECK(next.biases(0)[0] == doctest::Approx(0.2).epsilon(1e-15));
}

TEST_CASE("zero learning rate leaves the net unchanged") {
  Rng rng(3);
  auto net = random_net({4, 6, 3}, OutputActivation::identity, rng);
  const std::vector<double> x{0.1, 0.2, 0.3, 0.4}, t{1.0, -1.0, 0.5};
  auto [next, loss] = backprop_step(net, x, t, 0.0);
  CHECK(next == net);
  CHECK(loss == doctest::Approx(loss_at(net, x, t)));
}

TEST_CASE("analytic gradient matches central differences on 20 random nets") {
  Rng rng(2024);
  double worst = 0.0;
  for (int trial = 0; trial < 20; ++trial) {
    const std::size_t in = 2 + trial % 5, hid = 3 + trial % 7, out = 1 + trial % 4;
    auto act = trial % 3 == 0 ? OutputActivation::softmax : OutputActivation::identity;
    auto net = random_net({in, hid, out}, act, rng);
    std::vector<double> x(in), t(out);
    fill_normal(rng, 0.0, 1.0, x);
    fill_normal(rng, 0.0, 1.0, t);
    const auto g = mse_gradient(net, x, t);
    CHECK(g.loss == doctest::Approx(loss_at(net, x, t)).epsilon(1e-13));
    const double eps = 1e-5;
    for (std::size_t i = 0; i < net.parameter_count(); ++i) {
      DenseNet plus = net, minus = net;
      plus.params()[i] += eps;
      minus.params()[i] -= eps;
      const double fd = (loss_at(plus, x, t) - loss_at(minus, x, t)) / (2 * eps);
      const double denom = std::max({std::abs(fd), std::abs(g.grad[i]), 1e-6});
      worst = std::max(worst, std::abs(fd - g.grad[i]) / denom);
    }
  }
  CHECK(worst < 1e-4);
}

TEST_CASE("flatten and unflatten round-trip bit-exactly") {
  Rng rng(8);
  auto net = random_net({5, 7, 3}, OutputActivation::softmax, rng);
  const auto flat = net.flatten();
  auto back = DenseNet::unflatten(net.layer_sizes(), OutputActivation::softmax, flat);
  CHECK(back == net);
  CHECK(back.flatten() == flat);
  // Arbitrary vectors map back to themselves.
  std::vector<double> v(flat.size());
  fill_normal(rng, 0.0, 3.0, v);
  CHECK(DenseNet::unflatten({5, 7, 3}, OutputActivation::identity, v).flatten() == v);
  CHECK_THROWS_AS(DenseNet::unflatten({5, 7, 3}, OutputActivation::identity,
                                      std::vector<double>(flat.size() - 1)),
                  ShapeError);
}

TEST_CASE("non-finite gradient is rejected with the layer index") {
  DenseNet net({2, 2, 1}, OutputActivation::identity);
  std::vector<double> grad(net.parameter_count(), 0.0);
  grad[net.layer_offset(1)] = std::nan("");
  try {
    net.apply_gradient(grad, 0.1);
    FAIL("expected NumericError");
  } catch (const NumericError& e) {
    CHECK(std::string(e.what()).find("layer 1") != std::string::npos);
  }
  for (double v : net.params()) CHECK(v == 0.0);
}

TEST_CASE("gradient descent reduces the loss on a fixed pair") {
  Rng rng(21);
  auto net = random_net({3, 10, 2}, OutputActivation::identity, rng, 0.3);
  const std::vector<double> x{0.5, -0.2, 0.9}, t{0.3, -0.7};
  double prev = loss_at(net, x, t);
  for (int i = 0; i < 50; ++i) net = backprop_step(net, x, t, 0.05).first;
  CHECK(loss_at(net, x, t) < prev * 0.1);
}
