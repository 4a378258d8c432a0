#pragma once

// Metropolis chains over policy parameters.
//
// plain: every iteration re-evaluates the current point and the proposal
// on N fresh episodes each and accepts on the ratio of prior times mean
// exponential utility.
//
// cameo: episodes are collected under the current point only; the
// proposal is scored on counterfactual replays of those episodes, and both
// sides get a curiosity bonus from an online next-state predictor.

#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <vector>

#include "cameo/bootstrap.hpp"
#include "cameo/curiosity.hpp"
#include "cameo/environment.hpp"
#include "cameo/policy.hpp"
#include "cameo/random.hpp"
#include "cameo/target.hpp"

namespace cameo {

enum class SamplerMode { plain, cameo };
enum class BootstrapMode { off, resimulate, importance };

struct SamplerConfig {
  int iterations = 1000;          // K
  int episodes = 20;              // N
  double sigma_p = 0.1;           // proposal standard deviation
  std::optional<double> init_sd;  // theta_0 ~ N(0, init_sd^2); defaults to sigma_p
  SamplerMode mode = SamplerMode::plain;
  BootstrapMode bootstrap = BootstrapMode::resimulate;  // cameo only
  TdForm td_form = TdForm::mixed;
  std::uint64_t seed = 0;
  double gamma = 1.0;
  bool reuse_current = false;  // plain only: cache the current point's returns
  std::size_t hidden = 8;      // policy hidden width
  UtilityConfig utility;
  CuriosityConfig curiosity;

  /// Throws ConfigError when K < 1, N < 1, sigma_p < 0 or the utility
  /// settings are invalid.
  void validate() const;
};

struct ChainRecord {
  int k = 0;
  ParamVector theta;  // theta_k, after the accept/reject decision
  bool accepted = false;
  double log_u_current = 0.0;   // log utility of theta_{k-1} this iteration
  double log_u_proposal = 0.0;  // log utility of theta'
  double mean_return = 0.0;     // mean extrinsic return of theta_k's episodes
  double intrinsic_loss = 0.0;  // mean curiosity loss of theta_k's episodes; 0 in plain mode

  friend bool operator==(const ChainRecord&, const ChainRecord&) = default;
};

using Chain = std::vector<ChainRecord>;
using RecordCallback = std::function<void(const ChainRecord&)>;

/// theta + sigma_p * z, z ~ N(0, I).
ParamVector propose(const ParamVector& theta, double sigma_p, Rng& rng);

/// Accepts iff log(eps) < min(0, log_num - log_den), eps ~ U[0,1).
/// One uniform is drawn on every call.
bool mh_accept(double log_num, double log_den, Rng& rng);

/// Source of noisy returns for the plain chain.
class ReturnModel {
 public:
  virtual ~ReturnModel() = default;
  virtual std::size_t dimension() const = 0;
  /// n returns for theta, using streams derived from stream_seed.
  virtual std::vector<double> sample_returns(const ParamVector& theta, std::uint64_t stream_seed,
                                             int n) const = 0;
};

/// Episode returns of the softmax policy in an environment. Episode i uses
/// the streams of derive_seed(stream_seed, {i}).
class RolloutReturns final : public ReturnModel {
 public:
  RolloutReturns(const Environment& env, PolicySpec spec, double gamma);
  std::size_t dimension() const override { return spec_.dimension(); }
  std::vector<double> sample_returns(const ParamVector& theta, std::uint64_t stream_seed,
                                     int n) const override;

 private:
  const Environment* env_;
  PolicySpec spec_;
  double gamma_;
};

/// Deterministic synthetic return -scale * ||theta||^2; with T = 1 the
/// chain targets N(0, I / (2 scale)).
class QuadraticReturns final : public ReturnModel {
 public:
  explicit QuadraticReturns(std::size_t dim, double scale = 1.0) : dim_(dim), scale_(scale) {}
  std::size_t dimension() const override { return dim_; }
  std::vector<double> sample_returns(const ParamVector& theta, std::uint64_t stream_seed,
                                     int n) const override;

 private:
  std::size_t dim_;
  double scale_;
};

/// theta_0 for a chain of the given dimension.
ParamVector initial_theta(const SamplerConfig& config, std::size_t dim);

Chain run_plain_chain(const SamplerConfig& config, const ReturnModel& model,
                      const RecordCallback& on_record = {});

Chain run_plain_chain(const SamplerConfig& config, const Environment& env,
                      const RecordCallback& on_record = {});

Chain run_cameo_chain(const SamplerConfig& config, const Environment& env,
                      const RecordCallback& on_record = {});

/// Dispatches on config.mode.
Chain run_chain(const SamplerConfig& config, const Environment& env,
                const RecordCallback& on_record = {});

}  // namespace cameo
