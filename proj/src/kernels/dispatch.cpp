#include <cassert>
#include <cstdlib>
#include <string>

#include "internal.hpp"

namespace cameo::kernels {

namespace detail {
#if !(defined(__x86_64__) || defined(_M_X64))
const KernelTable* avx2_table() { return nullptr; }
#endif
#if !(defined(__aarch64__) || defined(_M_ARM64))
const KernelTable* neon_table() { return nullptr; }
#endif
}  // namespace detail

std::string_view isa_name(Isa isa) {
  switch (isa) {
    case Isa::scalar: return "scalar";
    case Isa::avx2: return "avx2";
    case Isa::neon: return "neon";
  }
  return "unknown";
}

const KernelTable* vector_table() {
  if (const auto* t = detail::avx2_table()) return t;
  return detail::neon_table();
}

namespace {

const KernelTable& choose() {
  const char* forced = std::getenv("CAMEO_KERNELS");
  if (forced != nullptr && std::string(forced) == "scalar") return scalar_table();
  const KernelTable* vec = vector_table();
  return vec != nullptr ? *vec : scalar_table();
}

}  // namespace

const KernelTable& active() {
  static const KernelTable& table = choose();
  return table;
}

double dot(std::span<const double> a, std::span<const double> b) {
  assert(a.size() == b.size());
  return active().dot(a.data(), b.data(), a.size());
}

void affine(std::span<const double> w, std::span<const double> bias,
            std::span<const double> x, std::span<double> y) {
  assert(w.size() == y.size() * x.size() && bias.size() == y.size());
  active().affine(w.data(), bias.data(), x.data(), y.data(), y.size(), x.size());
}

void transpose_mul(std::span<const double> w, std::span<const double> v,
                   std::span<double> out) {
  assert(w.size() == v.size() * out.size());
  active().transpose_mul(w.data(), v.data(), out.data(), v.size(), out.size());
}

void axpy(double alpha, std::span<const double> x, std::span<double> y) {
  assert(x.size() == y.size());
  active().axpy(alpha, x.data(), y.data(), x.size());
}

void rank1_update(double alpha, std::span<const double> u, std::span<const double> v,
                  std::span<double> a) {
  assert(a.size() == u.size() * v.size());
  active().rank1_update(alpha, u.data(), v.data(), a.data(), u.size(), v.size());
}

}  // namespace cameo::kernels
