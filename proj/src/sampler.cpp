#include "cameo/sampler.hpp"

#include <cmath>
#include <string>

#include "cameo/error.hpp"
#include "cameo/trajectory.hpp"

namespace cameo {
namespace {

// Stream tags under the chain seed. Iteration k >= 1 uses {k, tag}.
constexpr std::uint64_t kProposalStream = 0;
constexpr std::uint64_t kCurrentEpisodes = 1;
constexpr std::uint64_t kProposalEpisodes = 2;
constexpr std::uint64_t kAcceptStream = 3;
constexpr std::uint64_t kInitTheta = 9;
constexpr std::uint64_t kInitCuriosity = 10;

double mean(std::span<const double> v) {
  double s = 0.0;
  for (double x : v) s += x;
  return v.empty() ? 0.0 : s / static_cast<double>(v.size());
}

[[noreturn]] void rethrow_at(int k, const Error& e) {
  throw Error(e.kind(), "iteration " + std::to_string(k) + ": " + e.what());
}

}  // namespace

void SamplerConfig::validate() const {
  if (iterations < 1) throw ConfigError("iterations (K) must be at least 1");
  if (episodes < 1) throw ConfigError("episodes (N) must be at least 1");
  if (!(sigma_p >= 0.0) || !std::isfinite(sigma_p)) throw ConfigError("sigma_p must be finite and non-negative");
  if (init_sd && !(*init_sd >= 0.0)) throw ConfigError("init_sd must be non-negative");
  if (!(gamma >= 0.0 && gamma <= 1.0)) throw ConfigError("gamma must lie in [0, 1]");
  if (hidden < 1) throw ConfigError("hidden width must be positive");
  utility.validate();
}

ParamVector propose(const ParamVector& theta, double sigma_p, Rng& rng) {
  std::vector<double> z(theta.size());
  fill_normal(rng, 0.0, 1.0, z);
  for (std::size_t i = 0; i < z.size(); ++i) z[i] = theta[i] + sigma_p * z[i];
  return ParamVector(std::move(z));
}

bool mh_accept(double log_num, double log_den, Rng& rng) {
  const double eps = uniform01(rng);
  const double log_alpha = std::min(0.0, log_num - log_den);
  return std::log(eps) < log_alpha;
}

RolloutReturns::RolloutReturns(const Environment& env, PolicySpec spec, double gamma)
    : env_(&env), spec_(spec), gamma_(gamma) {}

std::vector<double> RolloutReturns::sample_returns(const ParamVector& theta,
                                                   std::uint64_t stream_seed, int n) const {
  const Policy policy(spec_, theta);
  std::vector<double> out(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    const Trajectory t = run_episode(*env_, policy, derive_seed(stream_seed, {static_cast<std::uint64_t>(i)}));
    out[static_cast<std::size_t>(i)] = empirical_return(t, gamma_);
  }
  return out;
}

std::vector<double> QuadraticReturns::sample_returns(const ParamVector& theta, std::uint64_t,
                                                     int n) const {
  double sq = 0.0;
  for (double v : theta) sq += v * v;
  return std::vector<double>(static_cast<std::size_t>(n), -scale_ * sq);
}

ParamVector initial_theta(const SamplerConfig& config, std::size_t dim) {
  Rng rng = make_rng(config.seed, {0, kInitTheta});
  ParamVector theta(dim);
  fill_normal(rng, 0.0, config.init_sd.value_or(config.sigma_p), theta.span());
  return theta;
}

Chain run_plain_chain(const SamplerConfig& config, const ReturnModel& model,
                      const RecordCallback& on_record) {
  config.validate();
  const double temp = config.utility.temperature;
  const PriorKind prior = config.utility.prior;
  ParamVector theta = initial_theta(config, model.dimension());
  std::optional<std::vector<double>> cached;

  Chain chain;
  chain.reserve(static_cast<std::size_t>(config.iterations));
  for (int k = 1; k <= config.iterations; ++k) {
    const auto uk = static_cast<std::uint64_t>(k);
    try {
      Rng prop_rng = make_rng(config.seed, {uk, kProposalStream});
      ParamVector candidate = propose(theta, config.sigma_p, prop_rng);

      std::vector<double> cur_returns =
          config.reuse_current && cached
              ? *cached
              : model.sample_returns(theta, derive_seed(config.seed, {uk, kCurrentEpisodes}), config.episodes);
      std::vector<double> prop_returns =
          model.sample_returns(candidate, derive_seed(config.seed, {uk, kProposalEpisodes}), config.episodes);

      const double lu_cur = log_mean_exp_utility(cur_returns, temp).value;
      const double lu_prop = log_mean_exp_utility(prop_returns, temp).value;
      Rng acc_rng = make_rng(config.seed, {uk, kAcceptStream});
      const bool accepted = mh_accept(prior_log_density(candidate, prior) + lu_prop,
                                      prior_log_density(theta, prior) + lu_cur, acc_rng);
      if (accepted) {
        theta = std::move(candidate);
        cached = std::move(prop_returns);
      } else {
        cached = std::move(cur_returns);
      }
      ChainRecord rec{k, theta, accepted, lu_cur, lu_prop, mean(*cached), 0.0};
      if (on_record) on_record(rec);
      chain.push_back(std::move(rec));
    } catch (const Error& e) {
      rethrow_at(k, e);
    }
  }
  return chain;
}

Chain run_plain_chain(const SamplerConfig& config, const Environment& env,
                      const RecordCallback& on_record) {
  const RolloutReturns model(env, PolicySpec::for_environment(env.spec(), config.hidden), config.gamma);
  return run_plain_chain(config, model, on_record);
}

Chain run_cameo_chain(const SamplerConfig& config, const Environment& env,
                      const RecordCallback& on_record) {
  config.validate();
  if (config.bootstrap == BootstrapMode::importance && env.spec().state_kind != StateKind::tabular) {
    throw UnsupportedError("importance-weighted bootstrap needs a tabular environment");
  }
  const PolicySpec spec = PolicySpec::for_environment(env.spec(), config.hidden);
  const UtilityConfig& uc = config.utility;
  const auto n = static_cast<std::size_t>(config.episodes);

  Rng phi_rng = make_rng(config.seed, {0, kInitCuriosity});
  CuriosityNet phi(spec.input_dim, config.curiosity, phi_rng);
  ParamVector theta = initial_theta(config, spec.dimension());

  Chain chain;
  chain.reserve(static_cast<std::size_t>(config.iterations));
  for (int k = 1; k <= config.iterations; ++k) {
    const auto uk = static_cast<std::uint64_t>(k);
    try {
      Rng prop_rng = make_rng(config.seed, {uk, kProposalStream});
      ParamVector candidate = propose(theta, config.sigma_p, prop_rng);
      const Policy current_policy(spec, theta);
      const Policy candidate_policy(spec, candidate);

      const std::uint64_t cur_seed = derive_seed(config.seed, {uk, kCurrentEpisodes});
      const std::uint64_t prop_seed = derive_seed(config.seed, {uk, kProposalEpisodes});

      std::vector<Trajectory> current(n);
      std::vector<Trajectory> counterfactual(n);
      std::vector<double> loss_cur(n), loss_prop(n);
      for (std::size_t i = 0; i < n; ++i) {
        const std::uint64_t episode_seed = derive_seed(cur_seed, {i});
        current[i] = run_episode(env, current_policy, episode_seed);
        if (config.bootstrap == BootstrapMode::off) {
          counterfactual[i] = run_episode(env, candidate_policy, derive_seed(prop_seed, {i}));
        } else {
          // Replay with the source episode's own action stream.
          Rng actions = episode_streams(episode_seed).actions;
          counterfactual[i] = resimulate(env, candidate_policy, current[i], i, actions).trajectory;
        }
        loss_cur[i] = phi.trajectory_loss(encode_states(spec, env, current[i]));
        loss_prop[i] = phi.train(encode_states(spec, env, counterfactual[i]));
      }

      std::vector<double> g_cur(n), g_prop(n);
      for (std::size_t i = 0; i < n; ++i) g_cur[i] = empirical_return(current[i], config.gamma);
      if (config.bootstrap == BootstrapMode::importance) {
        const AdvantageEstimate adv =
            importance_bootstrap(spec, env, candidate, theta, current, config.gamma, config.td_form);
        for (std::size_t i = 0; i < n; ++i) g_prop[i] = g_cur[i] + adv.correction;
      } else {
        for (std::size_t i = 0; i < n; ++i) g_prop[i] = empirical_return(counterfactual[i], config.gamma);
      }

      std::vector<double> r_cur(n), r_prop(n);
      for (std::size_t i = 0; i < n; ++i) {
        r_cur[i] = mixed_reward(g_cur[i], loss_cur[i], uc.mu);
        r_prop[i] = mixed_reward(g_prop[i], loss_prop[i], uc.mu);
      }
      const double lu_cur = log_mean_exp_utility(r_cur, uc.temperature).value;
      const double lu_prop = log_mean_exp_utility(r_prop, uc.temperature).value;

      Rng acc_rng = make_rng(config.seed, {uk, kAcceptStream});
      const bool accepted = mh_accept(prior_log_density(candidate, uc.prior) + lu_prop,
                                      prior_log_density(theta, uc.prior) + lu_cur, acc_rng);
      if (accepted) theta = std::move(candidate);
      ChainRecord rec{k,
                      theta,
                      accepted,
                      lu_cur,
                      lu_prop,
                      accepted ? mean(g_prop) : mean(g_cur),
                      accepted ? mean(loss_prop) : mean(loss_cur)};
      if (on_record) on_record(rec);
      chain.push_back(std::move(rec));
    } catch (const Error& e) {
      rethrow_at(k, e);
    }
  }
  return chain;
}

Chain run_chain(const SamplerConfig& config, const Environment& env, const RecordCallback& on_record) {
  return config.mode == SamplerMode::plain ? run_plain_chain(config, env, on_record)
                                           : run_cameo_chain(config, env, on_record);
}

}  // namespace cameo
