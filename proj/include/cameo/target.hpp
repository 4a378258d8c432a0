#pragma once

// Pieces of the unnormalized target over policy parameters:
// prior(theta) * mean utility of sampled episodes, all in log space.

#include <functional>
#include <span>

#include "cameo/policy.hpp"
#include "cameo/trajectory.hpp"

namespace cameo {

enum class PriorKind { uniform, boundary_penalty };

struct UtilityConfig {
  double temperature = 1.0;  // T > 0
  double mu = 1.0;           // extrinsic weight in the mixed reward, in [0, 1]
  PriorKind prior = PriorKind::uniform;

  /// Throws ConfigError on T <= 0 or mu outside [0, 1].
  void validate() const;
};

/// Natural log of an empirical utility.
struct LogUtility {
  double value = 0.0;
};

double empirical_return(std::span<const double> rewards, double gamma);
double empirical_return(const Trajectory& traj, double gamma);

/// log[(1/N) sum_i exp(v_i / T)] via the max-shift identity.
LogUtility log_mean_exp_utility(std::span<const double> values, double temperature);

/// Same reduction for any utility given as log U(v).
LogUtility log_mean_utility(std::span<const double> values,
                            const std::function<double(double)>& log_utility);

/// Mean squared excursion of theta outside [-1, 1]:
/// (1/D) sum_j 1[|theta_j| > 1] (theta_j^2 - 1)^2
double boundary_excursion(const ParamVector& theta);

/// uniform -> 0, boundary_penalty -> -boundary_excursion(theta).
double prior_log_density(const ParamVector& theta, PriorKind kind);

/// mu * extrinsic + (1 - mu) * intrinsic
double mixed_reward(double extrinsic_return, double intrinsic_loss, double mu);

}  // namespace cameo
