#include "doctest.h"

#include <cmath>
#include <map>
#include <vector>

#include "cameo/bootstrap.hpp"
#include "cameo/error.hpp"
#include "cameo/target.hpp"

using namespace cameo;

namespace {

Trajectory cells_traj(std::vector<int> cells, std::vector<double> rewards, bool terminated = true) {
  Trajectory t;
  for (int c : cells) {
    EnvState s;
    s.cell = c;
    t.states.push_back(s);
  }
  t.rewards = std::move(rewards);
  t.actions.assign(t.rewards.size(), 0);
  t.terminated = terminated;
  return t;
}

// One-hot gridworld policy that goes right on `right_cells` and down on
// `down_cells`, with near-certain probability.
ParamVector route_policy(const PolicySpec& spec, std::vector<int> right_cells, std::vector<int> down_cells) {
  ParamVector theta(spec.dimension());
  const std::size_t in = spec.input_dim, h = spec.hidden;
  for (int c : right_cells) theta[0 * in + c] = 1.0;
  for (int c : down_cells) theta[1 * in + c] = 1.0;
  const std::size_t w2 = h * in + h;
  theta[w2 + kRight * h + 0] = 60.0;
  theta[w2 + kDown * h + 1] = 60.0;
  return theta;
}

std::vector<Trajectory> batch(const Environment& env, const PolicySpec& spec, const ParamVector& theta, int n,
                              std::uint64_t seed) {
  const Policy pol(spec, theta);
  std::vector<Trajectory> out;
  for (int i = 0; i < n; ++i) out.push_back(run_episode(env, pol, derive_seed(seed, {std::uint64_t(i)})));
  return out;
}

double mc_return(const Environment& env, const PolicySpec& spec, const ParamVector& theta, int n,
                 std::uint64_t seed, double* se) {
  const auto b = batch(env, spec, theta, n, seed);
  double s = 0.0, s2 = 0.0;
  for (const auto& t : b) {
    const double g = empirical_return(t, 1.0);
    s += g;
    s2 += g * g;
  }
  const double m = s / n;
  *se = std::sqrt((s2 / n - m * m) / (n - 1));
  return m;
}

}  // namespace

TEST_CASE("visitation frequency") {
  std::vector<Trajectory> one{cells_traj({4, 4, 4, 4}, {-1, -1, -1})};
  auto r = visitation_frequency(one);
  CHECK(r.size() == 1);
  CHECK(r[4] == 1.0);

  std::vector<Trajectory> two{cells_traj({0, 1}, {-1}), cells_traj({2, 3}, {-1})};
  for (auto [c, f] : visitation_frequency(two)) CHECK(f == 0.25);

  // Counting oracle on a random batch of real episodes.
  auto env = make_environment("gridworld");
  const auto spec = PolicySpec::for_environment(env->spec());
  Rng rng(6);
  ParamVector theta(spec.dimension());
  fill_normal(rng, 0.0, 1.0, theta.span());
  const auto b = batch(*env, spec, theta, 30, 8);
  std::vector<int> counts(16, 0);
  int total = 0;
  for (const auto& t : b) {
    for (const auto& s : t.states) {
      ++counts[s.cell];
      ++total;
    }
  }
  const auto rho = visitation_frequency(b);
  double sum = 0.0;
  for (auto [c, f] : rho) {
    CHECK(f == doctest::Approx(counts[c] / double(total)).epsilon(1e-15));
    CHECK(f > 0.0);
    sum += f;
  }
  CHECK(std::abs(sum - 1.0) < 1e-12);

  Trajectory cont;
  cont.states.push_back(EnvState{});
  std::vector<Trajectory> c{cont};
  CHECK_THROWS_AS(visitation_frequency(c), UnsupportedError);
}

TEST_CASE("resimulating the source policy with its own stream reproduces the episode") {
  Rng rng(2);
  for (const char* name : {"gridworld", "cliff", "cartpole"}) {
    auto env = make_environment(name);
    const auto spec = PolicySpec::for_environment(env->spec());
    for (int trial = 0; trial < 20; ++trial) {
      ParamVector theta(spec.dimension());
      fill_normal(rng, 0.0, 0.8, theta.span());
      const Policy pol(spec, theta);
      const std::uint64_t seed = 1000 + trial;
      const Trajectory src = run_episode(*env, pol, seed);
      Rng actions = episode_streams(seed).actions;
      const auto cf = resimulate(*env, pol, src, 3, actions);
      CHECK(cf.trajectory == src);
      CHECK(cf.source_id == 3);
      CHECK(empirical_return(cf.trajectory, 1.0) == empirical_return(src, 1.0));
    }
  }
}

TEST_CASE("hand-traced counterfactuals") {
  auto cliff = make_environment("cliff");
  const auto cs = PolicySpec::for_environment(cliff->spec());
  ParamVector right(cs.dimension());
  right[cs.dimension() - cs.n_actions + kRight] = 60.0;
  const Trajectory src = run_episode(*cliff, Policy(cs, ParamVector(cs.dimension())), 4);
  Rng a(9);
  const auto cf = resimulate(*cliff, Policy(cs, right), src, 0, a);
  CHECK(cf.trajectory.length() == 1);
  CHECK(empirical_return(cf.trajectory, 1.0) == -10.0);

  auto grid = make_environment("gridworld");
  const auto gs = PolicySpec::for_environment(grid->spec());
  const auto route = route_policy(gs, {0, 1, 2}, {3, 7, 11});
  const Trajectory gsrc = run_episode(*grid, Policy(gs, ParamVector(gs.dimension())), 5);
  Rng b(10);
  const auto g = resimulate(*grid, Policy(gs, route), gsrc, 0, b);
  CHECK(g.trajectory.length() == 6);
  CHECK(empirical_return(g.trajectory, 1.0) == 10.0 - 5.0);
}

TEST_CASE("value table from returns-to-go") {
  std::vector<Trajectory> one{cells_traj({0, 1, 2, 3}, {-1, -1, 10})};
  const auto v = value_table_from_batch(one, 1.0);
  CHECK(*v.value(0) == 8.0);
  CHECK(*v.value(1) == 9.0);
  CHECK(*v.value(2) == 10.0);
  CHECK_FALSE(v.value(3).has_value());
  CHECK(v.visits(0) == 1);

  std::vector<Trajectory> mix{cells_traj({0, 1, 0, 2}, {-1, -2, 10}), cells_traj({1, 3}, {-3})};
  const auto v0 = value_table_from_batch(mix, 0.0);
  CHECK(*v0.value(0) == -1.0);  // the revisit of cell 0 is ignored
  CHECK(*v0.value(1) == doctest::Approx((-2.0 - 3.0) / 2.0));
  CHECK(v0.visits(0) == 1);

  // Weighted mean.
  std::vector<std::vector<double>> w{{1.0, 3.0, 1.0}, {1.0}};
  const auto vw = value_table_from_batch(mix, 0.0, &w);
  CHECK(*vw.value(1) == doctest::Approx((3.0 * -2.0 + 1.0 * -3.0) / 4.0));
  std::vector<std::vector<double>> bad{{1.0}};
  CHECK_THROWS_AS(value_table_from_batch(mix, 0.0, &bad), ShapeError);
}

TEST_CASE("value table of a deterministic route equals simulated returns") {
  auto grid = make_environment("gridworld");
  const auto gs = PolicySpec::for_environment(grid->spec());
  const Policy route(gs, route_policy(gs, {0, 1, 2}, {3, 7, 11}));
  const auto b = batch(*grid, gs, route_policy(gs, {0, 1, 2}, {3, 7, 11}), 5, 3);
  const auto v = value_table_from_batch(b, 0.9);
  for (int c : {0, 1, 2, 3, 7, 11}) {
    EnvState s;
    s.cell = c;
    Rng r(1);
    const double g = empirical_return(rollout(*grid, route, s, r), 0.9);
    CHECK(*v.value(c) == doctest::Approx(g).epsilon(1e-14));
  }
}

TEST_CASE("importance ratios and tail weights") {
  auto grid = make_environment("gridworld");
  const auto gs = PolicySpec::for_environment(grid->spec());
  Rng rng(12);
  ParamVector prev(gs.dimension()), prop(gs.dimension());
  fill_normal(rng, 0.0, 0.7, prev.span());
  fill_normal(rng, 0.0, 0.7, prop.span());
  const auto b = batch(*grid, gs, prev, 6, 21);
  const auto ratios = importance_ratios(gs, *grid, prop, prev, b);
  const Policy pn(gs, prop), po(gs, prev);
  for (std::size_t i = 0; i < b.size(); ++i) {
    REQUIRE(ratios[i].size() == b[i].length());
    for (std::size_t t = 0; t < b[i].length(); ++t) {
      const auto x = encode_state(gs, *grid, b[i].states[t]);
      const int a = b[i].actions[t];
      CHECK(ratios[i][t] == doctest::Approx(pn.action_probs(x)[a] / po.action_probs(x)[a]).epsilon(1e-14));
      CHECK(ratios[i][t] > 0.0);
    }
  }
  const auto w = tail_weights({{2.0, 0.5, 3.0}});
  CHECK(w[0] == std::vector<double>{3.0, 1.5, 3.0});
}

TEST_CASE("identity proposal: the correction is within two standard errors") {
  auto grid = make_environment("gridworld");
  const auto gs = PolicySpec::for_environment(grid->spec());
  Rng rng(77);
  for (int trial = 0; trial < 50; ++trial) {
    ParamVector theta(gs.dimension());
    fill_normal(rng, 0.0, 1.0, theta.span());
    const auto b = batch(*grid, gs, theta, 20, 500 + trial);
    const auto v = value_table_from_batch(b, 1.0);
    const auto est = is_advantage_estimate(gs, *grid, theta, theta, b, v, v, 1.0);
    CHECK(est.missing_values == 0);
    CHECK(std::abs(est.estimate - est.baseline) <= 2.0 * est.baseline_std_error + 1e-12);
    // Every episode starts in cell 0, so the TD terms telescope to zero.
    CHECK(est.correction == doctest::Approx(0.0).epsilon(1e-12).scale(1.0));
  }
}

TEST_CASE("missing values fall back to zero and are counted") {
  auto grid = make_environment("gridworld");
  const auto gs = PolicySpec::for_environment(grid->spec());
  ParamVector theta(gs.dimension());
  const auto b = batch(*grid, gs, theta, 3, 1);
  const ValueTable empty;
  const auto est = is_advantage_estimate(gs, *grid, theta, theta, b, empty, empty, 1.0);
  std::size_t expected = 0, transitions = 0;
  double reward_sum = 0.0;
  for (const auto& t : b) {
    transitions += t.length();
    expected += 2 * t.length() - 1;
    for (double r : t.rewards) reward_sum += r;
  }
  CHECK(est.transitions == transitions);
  CHECK(est.missing_values == expected);
  CHECK(est.correction == doctest::Approx(reward_sum / transitions));
}

TEST_CASE("goal-ward proposal is estimated as an improvement") {
  auto grid = make_environment("gridworld");
  const auto gs = PolicySpec::for_environment(grid->spec());
  const ParamVector uniform(gs.dimension());
  ParamVector goalward(gs.dimension());
  goalward[gs.dimension() - gs.n_actions + kRight] = 1.0;
  goalward[gs.dimension() - gs.n_actions + kDown] = 1.0;
  const auto b = batch(*grid, gs, uniform, 400, 31);
  const auto est = importance_bootstrap(gs, *grid, goalward, uniform, b, 1.0);
  double se = 0.0;
  const double fresh = mc_return(*grid, gs, goalward, 1000, 32, &se);
  CHECK(fresh > est.baseline);
  CHECK(est.estimate > est.baseline);
}

TEST_CASE("small perturbations: estimate agrees with fresh Monte Carlo") {
  auto grid = make_environment("gridworld");
  const auto gs = PolicySpec::for_environment(grid->spec());
  Rng rng(404);
  for (int trial = 0; trial < 5; ++trial) {
    ParamVector prev(gs.dimension());
    fill_normal(rng, 0.0, 0.5, prev.span());
    ParamVector prop = prev;
    std::vector<double> z(prev.size());
    fill_normal(rng, 0.0, 0.05, z);
    for (std::size_t i = 0; i < z.size(); ++i) prop[i] += z[i];
    const auto b = batch(*grid, gs, prev, 2000, 900 + trial);
    const auto est = importance_bootstrap(gs, *grid, prop, prev, b, 1.0);
    double se = 0.0;
    const double fresh = mc_return(*grid, gs, prop, 10000, 1900 + trial, &se);
    const double combined = std::sqrt(est.baseline_std_error * est.baseline_std_error +
                                      est.correction_std_error * est.correction_std_error + se * se);
    CHECK(std::abs(est.estimate - fresh) < 3.0 * combined);
  }
}
