// aarch64 only; Advanced SIMD is part of the base ISA there.

#include <arm_neon.h>

#include "internal.hpp"

namespace cameo::kernels {
namespace {

double dot_neon(const double* a, const double* b, std::size_t n) {
  float64x2_t acc0 = vdupq_n_f64(0.0);
  float64x2_t acc1 = vdupq_n_f64(0.0);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    acc0 = vfmaq_f64(acc0, vld1q_f64(a + i), vld1q_f64(b + i));
    acc1 = vfmaq_f64(acc1, vld1q_f64(a + i + 2), vld1q_f64(b + i + 2));
  }
  double s = vaddvq_f64(vaddq_f64(acc0, acc1));
  for (; i < n; ++i) s += a[i] * b[i];
  return s;
}

void affine_neon(const double* w, const double* bias, const double* x, double* y,
                 std::size_t rows, std::size_t cols) {
  for (std::size_t r = 0; r < rows; ++r) y[r] = bias[r] + dot_neon(w + r * cols, x, cols);
}

void axpy_neon(double alpha, const double* x, double* y, std::size_t n) {
  const float64x2_t va = vdupq_n_f64(alpha);
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) vst1q_f64(y + i, vfmaq_f64(vld1q_f64(y + i), va, vld1q_f64(x + i)));
  for (; i < n; ++i) y[i] += alpha * x[i];
}

void transpose_mul_neon(const double* w, const double* v, double* out,
                        std::size_t rows, std::size_t cols) {
  for (std::size_t c = 0; c < cols; ++c) out[c] = 0.0;
  for (std::size_t r = 0; r < rows; ++r) axpy_neon(v[r], w + r * cols, out, cols);
}

void rank1_update_neon(double alpha, const double* u, const double* v, double* a,
                       std::size_t rows, std::size_t cols) {
  for (std::size_t r = 0; r < rows; ++r) axpy_neon(alpha * u[r], v, a + r * cols, cols);
}

}  // namespace

namespace detail {

const KernelTable* neon_table() {
  static const KernelTable table{Isa::neon,         dot_neon,  affine_neon,
                                 transpose_mul_neon, axpy_neon, rank1_update_neon};
  return &table;
}

}  // namespace detail
}  // namespace cameo::kernels
