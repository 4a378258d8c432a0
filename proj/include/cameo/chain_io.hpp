#pragma once

// CSV persistence for chains and diagnostics. Reals are written with 17
// significant digits, which round-trips every double exactly.
//
//   chain.csv       k,accepted,log_u_current,log_u_proposal,mean_return,
//                   intrinsic_loss,theta_0,...,theta_{D-1}
//   similarity.csv  n x n matrix; header row and first column are indices
//   visitation.csv  "# env=<name>" line, then a c0..c{cols-1} header and
//                   one line per grid row
//   summary.csv     acceptance_rate,best_mean_return,retained_unique,K,N,seed

#include <cstdint>
#include <filesystem>
#include <span>
#include <string>

#include "cameo/diagnostics.hpp"
#include "cameo/sampler.hpp"

namespace cameo {

std::string format_real(double v);

void persist_chain(std::span<const ChainRecord> chain, const std::filesystem::path& path);

/// Accepts chain.csv itself or a directory containing it. Throws
/// NotFoundError when absent and ParseError naming the line on bad input.
Chain load_chain(const std::filesystem::path& path);

void write_similarity_csv(const SimilarityMatrix& m, const std::filesystem::path& path);
void write_visitation_csv(const VisitationGrid& g, const std::filesystem::path& path);

struct SummaryRow {
  double acceptance_rate = 0.0;
  double best_mean_return = 0.0;
  std::size_t retained_unique = 0;
  int iterations = 0;
  int episodes = 0;
  std::uint64_t seed = 0;
};

void write_summary_csv(const SummaryRow& row, const std::filesystem::path& path);

/// Per-iteration traces: k,accepted,retained_count,mean_return,intrinsic_loss.
void write_traces_csv(const ChainSummary& s, std::span<const ChainRecord> chain,
                      const std::filesystem::path& path);

}  // namespace cameo
