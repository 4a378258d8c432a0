#pragma once

// Post-chain analysis: traces, acceptance, cosine similarity between
// retained parameter vectors, and state-visitation heatmaps.

#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "cameo/environment.hpp"
#include "cameo/policy.hpp"
#include "cameo/sampler.hpp"

namespace cameo {

struct ChainSummary {
  double acceptance_rate = 0.0;
  std::vector<int> retained_count_trace;
  std::vector<double> mean_return_trace;
  std::vector<double> intrinsic_loss_trace;
  double best_mean_return = 0.0;
  std::size_t retained_unique = 0;  // distinct states visited by the chain
};

ChainSummary chain_summary(std::span<const ChainRecord> chain);

/// Burn-in used when none is given: 10% of the chain.
int default_burn_in(std::size_t chain_length);

/// u.v / (|u||v|). Throws InputError on a zero vector or length mismatch.
double cosine_similarity(const ParamVector& u, const ParamVector& v);

/// theta_k for k > burn_in; with unique_only, consecutive repeats (left by
/// rejections) are collapsed.
std::vector<ParamVector> retained_thetas(std::span<const ChainRecord> chain, int burn_in,
                                         bool unique_only);

struct SimilarityMatrix {
  std::size_t n = 0;
  std::vector<double> values;  // row-major n x n
  double at(std::size_t i, std::size_t j) const { return values[i * n + j]; }
  /// Mean over i != j; 1 for a 1x1 matrix.
  double mean_off_diagonal() const;
};

SimilarityMatrix similarity_matrix(std::span<const ParamVector> thetas);
SimilarityMatrix similarity_matrix(std::span<const ChainRecord> chain, int burn_in, bool unique_only);

struct VisitationGrid {
  std::string env_name;
  int rows = 0;
  int cols = 0;
  std::vector<double> frequency;  // row-major rows x cols, sums to 1
  double at(int r, int c) const { return frequency[static_cast<std::size_t>(r * cols + c)]; }
};

/// Every rollout used for a visitation aggregate; policy p's episode e uses
/// the streams of derive_seed(seed, {p, e}).
std::vector<Trajectory> policy_rollouts(std::span<const ParamVector> policies, const Environment& env,
                                        std::size_t hidden, int episodes_per_policy,
                                        std::uint64_t seed);

VisitationGrid visitation_grid(std::span<const Trajectory> trajs, const Environment& env);

VisitationGrid aggregate_visitation(std::span<const ParamVector> policies, const Environment& env,
                                    int episodes_per_policy, std::uint64_t seed,
                                    std::size_t hidden = 8);

/// Distinct cell sequences of goal-reaching rollouts with their counts.
std::map<std::vector<int>, int> goal_paths(std::span<const Trajectory> trajs, int goal_cell);

/// Number of distinct detours from the most frequent goal path. A detour is
/// the set of cells a goal-reaching path visits off the dominant path whose
/// aggregate frequency exceeds `threshold`; paths that differ only by loops
/// over dominant-path cells count once (or not at all).
int alternative_path_count(const std::map<std::vector<int>, int>& paths, const VisitationGrid& grid,
                           double threshold);

}  // namespace cameo
