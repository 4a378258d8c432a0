#include "cameo/random.hpp"

namespace cameo {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

std::uint64_t derive_seed(std::uint64_t root, std::initializer_list<std::uint64_t> tags) {
  std::uint64_t h = splitmix64(root);
  for (std::uint64_t t : tags) h = splitmix64(h ^ splitmix64(t + 0x632be59bd9b4e019ULL));
  return h;
}

double uniform01(Rng& rng) { return std::uniform_real_distribution<double>(0.0, 1.0)(rng); }

void fill_normal(Rng& rng, double mean, double sd, std::span<double> out) {
  // Draw standard normals and scale so the stream advances identically for any sd.
  std::normal_distribution<double> dist(0.0, 1.0);
  for (double& v : out) v = mean + sd * dist(rng);
}

}  // namespace cameo
