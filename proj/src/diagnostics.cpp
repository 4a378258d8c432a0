#include "cameo/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "cameo/error.hpp"
#include "cameo/trajectory.hpp"

namespace cameo {

ChainSummary chain_summary(std::span<const ChainRecord> chain) {
  if (chain.empty()) throw InputError("summary of an empty chain");
  ChainSummary s;
  int count = 0;
  s.best_mean_return = chain.front().mean_return;
  for (const ChainRecord& r : chain) {
    if (r.accepted) ++count;
    s.retained_count_trace.push_back(count);
    s.mean_return_trace.push_back(r.mean_return);
    s.intrinsic_loss_trace.push_back(r.intrinsic_loss);
    s.best_mean_return = std::max(s.best_mean_return, r.mean_return);
  }
  s.acceptance_rate = static_cast<double>(count) / static_cast<double>(chain.size());
  s.retained_unique = retained_thetas(chain, 0, true).size();
  return s;
}

int default_burn_in(std::size_t chain_length) { return static_cast<int>(chain_length / 10); }

double cosine_similarity(const ParamVector& u, const ParamVector& v) {
  if (u.size() != v.size()) throw InputError("cosine similarity of vectors with different lengths");
  double uv = 0.0, uu = 0.0, vv = 0.0;
  for (std::size_t i = 0; i < u.size(); ++i) {
    uv += u[i] * v[i];
    uu += u[i] * u[i];
    vv += v[i] * v[i];
  }
  if (uu == 0.0 || vv == 0.0) throw InputError("cosine similarity is undefined for a zero vector");
  return std::clamp(uv / (std::sqrt(uu) * std::sqrt(vv)), -1.0, 1.0);
}

std::vector<ParamVector> retained_thetas(std::span<const ChainRecord> chain, int burn_in,
                                         bool unique_only) {
  std::vector<ParamVector> out;
  for (const ChainRecord& r : chain) {
    if (r.k <= burn_in) continue;
    if (unique_only && !out.empty() && out.back() == r.theta) continue;
    out.push_back(r.theta);
  }
  return out;
}

double SimilarityMatrix::mean_off_diagonal() const {
  if (n < 2) return 1.0;
  double s = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      if (i != j) s += at(i, j);
    }
  }
  return s / static_cast<double>(n * (n - 1));
}

SimilarityMatrix similarity_matrix(std::span<const ParamVector> thetas) {
  if (thetas.empty()) throw InputError("similarity matrix of an empty selection");
  SimilarityMatrix m;
  m.n = thetas.size();
  m.values.assign(m.n * m.n, 0.0);
  for (std::size_t i = 0; i < m.n; ++i) {
    m.values[i * m.n + i] = 1.0;
    for (std::size_t j = i + 1; j < m.n; ++j) {
      const double c = cosine_similarity(thetas[i], thetas[j]);
      m.values[i * m.n + j] = c;
      m.values[j * m.n + i] = c;
    }
  }
  return m;
}

SimilarityMatrix similarity_matrix(std::span<const ChainRecord> chain, int burn_in, bool unique_only) {
  return similarity_matrix(retained_thetas(chain, burn_in, unique_only));
}

std::vector<Trajectory> policy_rollouts(std::span<const ParamVector> policies, const Environment& env,
                                        std::size_t hidden, int episodes_per_policy,
                                        std::uint64_t seed) {
  const PolicySpec spec = PolicySpec::for_environment(env.spec(), hidden);
  std::vector<Trajectory> out;
  out.reserve(policies.size() * static_cast<std::size_t>(std::max(episodes_per_policy, 0)));
  for (std::size_t p = 0; p < policies.size(); ++p) {
    const Policy policy(spec, policies[p]);
    for (int e = 0; e < episodes_per_policy; ++e) {
      out.push_back(run_episode(env, policy, derive_seed(seed, {p, static_cast<std::uint64_t>(e)})));
    }
  }
  return out;
}

VisitationGrid visitation_grid(std::span<const Trajectory> trajs, const Environment& env) {
  const EnvSpec& es = env.spec();
  if (es.state_kind != StateKind::tabular) {
    throw UnsupportedError("visitation heatmaps need a tabular environment, got " + es.name);
  }
  if (trajs.empty()) throw InputError("visitation grid of an empty batch");
  VisitationGrid g;
  g.env_name = es.name;
  g.rows = es.grid_rows;
  g.cols = es.grid_cols;
  g.frequency.assign(static_cast<std::size_t>(g.rows * g.cols), 0.0);
  double total = 0.0;
  for (const Trajectory& t : trajs) {
    for (const EnvState& s : t.states) {
      g.frequency[static_cast<std::size_t>(s.cell)] += 1.0;
      total += 1.0;
    }
  }
  for (double& f : g.frequency) f /= total;
  return g;
}

VisitationGrid aggregate_visitation(std::span<const ParamVector> policies, const Environment& env,
                                    int episodes_per_policy, std::uint64_t seed, std::size_t hidden) {
  if (env.spec().state_kind != StateKind::tabular) {
    throw UnsupportedError("visitation heatmaps need a tabular environment, got " + env.spec().name);
  }
  if (policies.empty() || episodes_per_policy < 1) throw InputError("no rollouts to aggregate");
  const auto trajs = policy_rollouts(policies, env, hidden, episodes_per_policy, seed);
  return visitation_grid(trajs, env);
}

std::map<std::vector<int>, int> goal_paths(std::span<const Trajectory> trajs, int goal_cell) {
  std::map<std::vector<int>, int> paths;
  for (const Trajectory& t : trajs) {
    if (t.states.empty() || t.states.back().cell != goal_cell) continue;
    std::vector<int> cells;
    cells.reserve(t.states.size());
    for (const EnvState& s : t.states) cells.push_back(s.cell);
    ++paths[cells];
  }
  return paths;
}

int alternative_path_count(const std::map<std::vector<int>, int>& paths, const VisitationGrid& grid,
                           double threshold) {
  if (paths.empty()) return 0;
  auto dominant = paths.begin();
  for (auto it = paths.begin(); it != paths.end(); ++it) {
    if (it->second > dominant->second) dominant = it;
  }
  const std::set<int> main_cells(dominant->first.begin(), dominant->first.end());
  std::set<std::set<int>> detours;
  for (auto it = paths.begin(); it != paths.end(); ++it) {
    if (it == dominant) continue;
    std::set<int> off;
    for (int c : it->first) {
      if (!main_cells.contains(c) && grid.frequency[static_cast<std::size_t>(c)] > threshold) off.insert(c);
    }
    if (!off.empty()) detours.insert(std::move(off));
  }
  const int count = static_cast<int>(detours.size());
  return count;
}

}  // namespace cameo
