#include "doctest.h"

#include <cmath>
#include <numbers>
#include <vector>

#include "cameo/environment.hpp"
#include "cameo/error.hpp"
#include "cameo/sampler.hpp"

using namespace cameo;

namespace {

// Quadratic returns plus a constant; used to check that only utility
// differences matter.
class ShiftedQuadratic final : public ReturnModel {
 public:
  ShiftedQuadratic(std::size_t dim, double shift) : inner_(dim), shift_(shift) {}
  std::size_t dimension() const override { return inner_.dimension(); }
  std::vector<double> sample_returns(const ParamVector& theta, std::uint64_t seed, int n) const override {
    auto r = inner_.sample_returns(theta, seed, n);
    for (double& v : r) v += shift_;
    return r;
  }

 private:
  QuadraticReturns inner_;
  double shift_;
};

class FailingModel final : public ReturnModel {
 public:
  std::size_t dimension() const override { return 2; }
  std::vector<double> sample_returns(const ParamVector&, std::uint64_t, int) const override {
    if (++calls_ > 7) throw NumericError("rollout blew up");
    return {0.0};
  }

 private:
  mutable int calls_ = 0;
};

SamplerConfig synthetic_config(int K, double sigma_p, std::uint64_t seed) {
  SamplerConfig c;
  c.iterations = K;
  c.episodes = 1;
  c.sigma_p = sigma_p;
  c.seed = seed;
  c.utility.temperature = 1.0;
  c.utility.prior = PriorKind::uniform;
  return c;
}

}  // namespace

TEST_CASE("proposal moments") {
  const ParamVector theta(std::vector<double>{0.5, -1.0, 2.0});
  const double sp = 0.3;
  Rng rng(10);
  const int n = 100000;
  std::vector<double> s(3, 0.0), s2(3, 0.0);
  for (int i = 0; i < n; ++i) {
    const auto p = propose(theta, sp, rng);
    for (int j = 0; j < 3; ++j) {
      s[j] += p[j];
      s2[j] += p[j] * p[j];
    }
  }
  for (int j = 0; j < 3; ++j) {
    const double m = s[j] / n;
    const double sd = std::sqrt(s2[j] / n - m * m);
    CHECK(std::abs(sd / sp - 1.0) < 0.02);
    CHECK(std::abs(m - theta[j]) < 3.0 * sp / std::sqrt(double(n)));
  }
  Rng r0(1);
  CHECK(propose(theta, 0.0, r0) == theta);
}

TEST_CASE("metropolis acceptance") {
  Rng rng(5);
  for (int i = 0; i < 10000; ++i) {
    CHECK(mh_accept(-3.0, -3.0, rng));
    CHECK(mh_accept(500.0, -500.0, rng));
  }
  int acc = 0;
  const int n = 100000;
  for (int i = 0; i < n; ++i) acc += mh_accept(std::log(0.5), 0.0, rng);
  CHECK(std::abs(acc / double(n) - 0.5) < 0.01);
}

TEST_CASE("acceptance depends only on the log difference") {
  Rng r(3);
  for (int i = 0; i < 2000; ++i) {
    const double a = (r() % 1000) / 100.0 - 5.0, b = (r() % 1000) / 100.0 - 5.0;
    Rng x(i), y(i);
    CHECK(mh_accept(a, b, x) == mh_accept(a + 1234.5, b + 1234.5, y));
  }
  const auto c = synthetic_config(3000, 0.5, 8);
  const auto base = run_plain_chain(c, QuadraticReturns(2));
  const auto shifted = run_plain_chain(c, ShiftedQuadratic(2, 77.0));
  REQUIRE(base.size() == shifted.size());
  for (std::size_t i = 0; i < base.size(); ++i) {
    CHECK(base[i].accepted == shifted[i].accepted);
    CHECK(base[i].theta == shifted[i].theta);
  }
}

TEST_CASE("synthetic gaussian target: moments") {
  const auto chain = run_plain_chain(synthetic_config(50000, 0.5, 2024), QuadraticReturns(2));
  REQUIRE(chain.size() == 50000);
  for (int j = 0; j < 2; ++j) {
    double s = 0.0, s2 = 0.0;
    int n = 0;
    for (std::size_t k = 5000; k < chain.size(); ++k) {
      s += chain[k].theta[j];
      s2 += chain[k].theta[j] * chain[k].theta[j];
      ++n;
    }
    const double m = s / n, var = s2 / n - m * m;
    CHECK(std::abs(m) < 0.05);
    CHECK(var >= 0.45);
    CHECK(var <= 0.55);
  }
}

TEST_CASE("synthetic gaussian target: chi-square over a coarse partition") {
  // N(0, I/2) in 2-D: |theta|^2 ~ Exp(1). Five equal-probability rings
  // times four quadrants give 20 cells of probability 0.05 each.
  const auto chain = run_plain_chain(synthetic_config(205000, 0.5, 99), QuadraticReturns(2));
  std::vector<int> counts(20, 0);
  int n = 0;
  for (std::size_t k = 5000; k < chain.size(); k += 20) {
    const double x = chain[k].theta[0], y = chain[k].theta[1];
    const double r2 = x * x + y * y;
    const double u = 1.0 - std::exp(-r2);  // ring CDF
    const int ring = std::min(4, int(u * 5.0));
    const int quad = (x >= 0 ? 0 : 1) + (y >= 0 ? 0 : 2);
    ++counts[ring * 4 + quad];
    ++n;
  }
  double chi2 = 0.0;
  const double e = n * 0.05;
  for (int c : counts) chi2 += (c - e) * (c - e) / e;
  // Upper 0.001 quantile of chi-square with 19 degrees of freedom.
  CHECK(chi2 < 43.82);
}

TEST_CASE("zero proposal width accepts everything and never moves") {
  const auto chain = run_plain_chain(synthetic_config(500, 0.0, 4), QuadraticReturns(3));
  for (const auto& r : chain) {
    CHECK(r.accepted);
    CHECK(r.theta == chain.front().theta);
  }
}

TEST_CASE("records: count, rejection keeps theta, reproducibility") {
  auto env = make_environment("gridworld");
  SamplerConfig c;
  c.iterations = 120;
  c.episodes = 5;
  c.seed = 17;
  for (auto mode : {SamplerMode::plain, SamplerMode::cameo}) {
    c.mode = mode;
    const auto a = run_chain(c, *env);
    const auto b = run_chain(c, *env);
    CHECK(a == b);
    REQUIRE(a.size() == 120);
    ParamVector prev = initial_theta(c, PolicySpec::for_environment(env->spec()).dimension());
    for (std::size_t k = 0; k < a.size(); ++k) {
      CHECK(a[k].k == int(k) + 1);
      if (!a[k].accepted) CHECK(a[k].theta == prev);
      prev = a[k].theta;
      if (mode == SamplerMode::plain) CHECK(a[k].intrinsic_loss == 0.0);
      else CHECK(a[k].intrinsic_loss >= 0.0);
    }
    c.seed = 18;
    CHECK_FALSE(run_chain(c, *env) == a);
    c.seed = 17;
  }
}

TEST_CASE("cameo with mu = 1 and no bootstrap reduces to the plain chain") {
  for (const char* name : {"gridworld", "cartpole"}) {
    auto env = make_environment(name);
    SamplerConfig c;
    c.iterations = 60;
    c.episodes = 4;
    c.seed = 5;
    c.utility.mu = 1.0;
    c.utility.prior = PriorKind::boundary_penalty;
    c.utility.temperature = 2.0;
    c.sigma_p = 0.5;  // large enough for the prior to matter
    c.bootstrap = BootstrapMode::off;
    c.mode = SamplerMode::plain;
    const auto plain = run_chain(c, *env);
    c.mode = SamplerMode::cameo;
    const auto cameo = run_chain(c, *env);
    REQUIRE(plain.size() == cameo.size());
    for (std::size_t i = 0; i < plain.size(); ++i) {
      CHECK(plain[i].theta == cameo[i].theta);
      CHECK(plain[i].accepted == cameo[i].accepted);
      CHECK(plain[i].log_u_current == cameo[i].log_u_current);
      CHECK(plain[i].log_u_proposal == cameo[i].log_u_proposal);
      CHECK(plain[i].mean_return == cameo[i].mean_return);
    }
  }
}

TEST_CASE("errors carry the iteration index") {
  try {
    run_plain_chain(synthetic_config(10, 0.1, 1), FailingModel());
    FAIL("expected an error");
  } catch (const NumericError&) {
    FAIL("should be rethrown as the base error type with context");
  } catch (const Error& e) {
    CHECK(e.kind() == std::string("numeric"));
    CHECK(std::string(e.what()).find("iteration 4") != std::string::npos);
  }
}

TEST_CASE("config validation") {
  SamplerConfig c;
  CHECK_NOTHROW(c.validate());
  c.iterations = 0;
  CHECK_THROWS_AS(c.validate(), ConfigError);
  c.iterations = 1;
  c.episodes = 0;
  CHECK_THROWS_AS(c.validate(), ConfigError);
  c.episodes = 1;
  c.sigma_p = -0.1;
  CHECK_THROWS_AS(c.validate(), ConfigError);
  c.sigma_p = 0.1;
  c.mode = SamplerMode::cameo;
  c.bootstrap = BootstrapMode::importance;
  auto cp = make_environment("cartpole");
  CHECK_THROWS_AS(run_chain(c, *cp), UnsupportedError);
}
