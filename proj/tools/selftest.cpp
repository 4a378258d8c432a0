#include "selftest.hpp"

#include <cmath>
#include <functional>
#include <string>
#include <vector>

#include "cameo/dense_net.hpp"
#include "cameo/environment.hpp"
#include "cameo/kernels.hpp"
#include "cameo/sampler.hpp"
#include "cameo/target.hpp"

namespace cameo::tools {
namespace {

double max_gradient_error(std::uint64_t seed) {
  Rng rng(seed);
  std::uniform_int_distribution<int> width(1, 6);
  DenseNet net({static_cast<std::size_t>(width(rng)), static_cast<std::size_t>(width(rng)),
                static_cast<std::size_t>(width(rng))},
               OutputActivation::identity);
  fill_normal(rng, 0.0, 0.7, net.params());
  std::vector<double> x(net.input_dim()), y(net.output_dim());
  fill_normal(rng, 0.0, 1.0, x);
  fill_normal(rng, 0.0, 1.0, y);
  const auto g = mse_gradient(net, x, y).grad;
  double worst = 0.0;
  for (std::size_t i = 0; i < g.size(); ++i) {
    DenseNet up = net, dn = net;
    up.params()[i] += 1e-5;
    dn.params()[i] -= 1e-5;
    const double fd = (mse_loss(forward(up, x), y) - mse_loss(forward(dn, x), y)) / 2e-5;
    worst = std::max(worst, std::abs(fd - g[i]) / std::max(1e-6, std::abs(fd) + std::abs(g[i])));
  }
  return worst;
}

}  // namespace

bool run_selftest(std::ostream& out) {
  struct Check {
    std::string name;
    std::function<bool()> fn;
  };
  const std::vector<Check> checks{
      {"kernels: vector dot matches scalar",
       [] {
         const auto* vec = kernels::vector_table();
         if (vec == nullptr) return true;
         std::vector<double> a(37), b(37);
         Rng rng(3);
         fill_normal(rng, 0.0, 1.0, a);
         fill_normal(rng, 0.0, 1.0, b);
         const double s = kernels::scalar_table().dot(a.data(), b.data(), a.size());
         return std::abs(vec->dot(a.data(), b.data(), a.size()) - s) < 1e-12 * (1.0 + std::abs(s));
       }},
      {"nn: analytic gradient matches finite differences",
       [] {
         for (std::uint64_t s = 0; s < 5; ++s) {
           if (max_gradient_error(s) >= 1e-4) return false;
         }
         return true;
       }},
      {"target: log-mean-exp of (0, ln 3) is ln 2",
       [] {
         const std::vector<double> v{0.0, std::log(3.0)};
         return std::abs(log_mean_exp_utility(v, 1.0).value - std::log(2.0)) < 1e-12;
       }},
      {"target: boundary prior of (2,0,0,0) is -2.25",
       [] { return prior_log_density(ParamVector({2.0, 0.0, 0.0, 0.0}), PriorKind::boundary_penalty) == -2.25; }},
      {"env: gridworld shortest path returns 5",
       [] {
         const GridLayout g = GridLayout::gridworld();
         EnvState s;
         s.cell = 0;
         double ret = 0.0;
         for (int a : {kDown, kDown, kDown, kRight, kRight, kRight}) {
           const Transition t = grid_step(g, s, a);
           ret += t.reward;
           s = t.next_state;
         }
         return ret == 5.0 && s.cell == 15;
       }},
      {"sampler: synthetic Gaussian variance near 0.5",
       [] {
         SamplerConfig cfg;
         cfg.iterations = 20000;
         cfg.episodes = 1;
         cfg.sigma_p = 0.5;
         cfg.seed = 11;
         const Chain chain = run_plain_chain(cfg, QuadraticReturns(2));
         double s = 0.0, ss = 0.0;
         int n = 0;
         for (const ChainRecord& r : chain) {
           if (r.k <= 2000) continue;
           s += r.theta[0];
           ss += r.theta[0] * r.theta[0];
           ++n;
         }
         const double m = s / n;
         const double var = ss / n - m * m;
         return var > 0.4 && var < 0.6;
       }},
      {"sampler: same seed gives identical chains",
       [] {
         SamplerConfig cfg;
         cfg.iterations = 20;
         cfg.episodes = 3;
         cfg.mode = SamplerMode::cameo;
         cfg.utility.mu = 0.5;
         cfg.utility.prior = PriorKind::boundary_penalty;
         cfg.seed = 5;
         const auto env = make_environment("gridworld");
         return run_chain(cfg, *env) == run_chain(cfg, *env);
       }},
  };
  bool all = true;
  for (const Check& c : checks) {
    bool ok = false;
    try {
      ok = c.fn();
    } catch (const std::exception& e) {
      out << "  error: " << e.what() << '\n';
    }
    out << (ok ? "PASS " : "FAIL ") << c.name << '\n';
    all = all && ok;
  }
  out << (all ? "selftest passed" : "selftest FAILED") << '\n';
  return all;
}

}  // namespace cameo::tools
