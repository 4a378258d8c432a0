#pragma once

// Seeded random streams. Every consumer that needs randomness gets its own
// engine whose seed is derived from (root seed, tag path), so results do not
// depend on the order in which streams are consumed.

#include <cstdint>
#include <initializer_list>
#include <random>
#include <span>
#include <vector>

namespace cameo {

using Rng = std::mt19937_64;

std::uint64_t splitmix64(std::uint64_t x);

/// Deterministic seed for the stream identified by `tags` under `root`.
std::uint64_t derive_seed(std::uint64_t root, std::initializer_list<std::uint64_t> tags);

inline Rng make_rng(std::uint64_t root, std::initializer_list<std::uint64_t> tags) {
  return Rng(derive_seed(root, tags));
}

double uniform01(Rng& rng);

/// Fills `out` with independent N(mean, sd^2) draws.
void fill_normal(Rng& rng, double mean, double sd, std::span<double> out);

}  // namespace cameo
