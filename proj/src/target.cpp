#include "cameo/target.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include "cameo/error.hpp"

namespace cameo {

void UtilityConfig::validate() const {
  if (!(temperature > 0.0) || !std::isfinite(temperature)) {
    throw ConfigError("temperature must be positive and finite");
  }
  if (!(mu >= 0.0 && mu <= 1.0)) throw ConfigError("mu must lie in [0, 1]");
}

double empirical_return(std::span<const double> rewards, double gamma) {
  double g = 0.0;
  double discount = 1.0;
  for (double r : rewards) {
    g += discount * r;
    discount *= gamma;
  }
  return g;
}

double empirical_return(const Trajectory& traj, double gamma) {
  return empirical_return(traj.rewards, gamma);
}

LogUtility log_mean_utility(std::span<const double> values,
                            const std::function<double(double)>& log_utility) {
  if (values.empty()) throw InputError("empirical utility of an empty sample");
  std::vector<double> logs(values.size());
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (!std::isfinite(values[i])) throw InputError("non-finite value in utility sample");
    logs[i] = log_utility(values[i]);
  }
  const double m = *std::max_element(logs.begin(), logs.end());
  double s = 0.0;
  for (double l : logs) s += std::exp(l - m);
  return {m + std::log(s / static_cast<double>(values.size()))};
}

LogUtility log_mean_exp_utility(std::span<const double> values, double temperature) {
  if (!(temperature > 0.0)) throw InputError("temperature must be positive");
  return log_mean_utility(values, [temperature](double v) { return v / temperature; });
}

double boundary_excursion(const ParamVector& theta) {
  if (theta.size() == 0) return 0.0;
  double s = 0.0;
  for (double v : theta) {
    if (v < -1.0 || v > 1.0) {
      const double e = v * v - 1.0;
      s += e * e;
    }
  }
  return s / static_cast<double>(theta.size());
}

double prior_log_density(const ParamVector& theta, PriorKind kind) {
  return kind == PriorKind::uniform ? 0.0 : -boundary_excursion(theta);
}

double mixed_reward(double extrinsic_return, double intrinsic_loss, double mu) {
  return mu * extrinsic_return + (1.0 - mu) * intrinsic_loss;
}

}  // namespace cameo
