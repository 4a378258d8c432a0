#pragma once

// Dense linear-algebra kernels used by the MLP substrate.
//
// Every kernel has a scalar reference implementation. Vectorized variants
// (AVX2+FMA on x86-64, NEON on aarch64) are compiled into separate
// translation units and picked once at startup from the CPU's feature set.
// The CAMEO_KERNELS environment variable (scalar | avx2 | neon) overrides
// the choice; vector variants reorder floating-point sums, so results agree
// with the scalar path to rounding, not bit-for-bit.

#include <cstddef>
#include <span>
#include <string_view>

namespace cameo::kernels {

enum class Isa { scalar, avx2, neon };

std::string_view isa_name(Isa isa);

/// Function table for one instruction set. Matrices are row-major.
struct KernelTable {
  Isa isa;
  // sum_i a[i] * b[i]
  double (*dot)(const double* a, const double* b, std::size_t n);
  // y = W x + bias, W is rows x cols
  void (*affine)(const double* w, const double* bias, const double* x, double* y,
                 std::size_t rows, std::size_t cols);
  // out = W^T v, W is rows x cols
  void (*transpose_mul)(const double* w, const double* v, double* out,
                        std::size_t rows, std::size_t cols);
  // y += alpha * x
  void (*axpy)(double alpha, const double* x, double* y, std::size_t n);
  // A += alpha * u v^T, A is rows x cols
  void (*rank1_update)(double alpha, const double* u, const double* v, double* a,
                       std::size_t rows, std::size_t cols);
};

const KernelTable& scalar_table();

/// Vector table for this build and CPU, or nullptr when unavailable.
const KernelTable* vector_table();

/// Table in use by the library: chosen on first call, fixed afterwards.
const KernelTable& active();

// Span conveniences over the active table.

double dot(std::span<const double> a, std::span<const double> b);

void affine(std::span<const double> w, std::span<const double> bias,
            std::span<const double> x, std::span<double> y);

void transpose_mul(std::span<const double> w, std::span<const double> v,
                   std::span<double> out);

void axpy(double alpha, std::span<const double> x, std::span<double> y);

void rank1_update(double alpha, std::span<const double> u, std::span<const double> v,
                  std::span<double> a);

}  // namespace cameo::kernels
