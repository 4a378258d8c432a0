#include "cameo/kernels.hpp"

namespace cameo::kernels {
namespace {

double dot_scalar(const double* a, const double* b, std::size_t n) {
  double s = 0.0;
  for (std::size_t i = 0; i < n; ++i) s += a[i] * b[i];
  return s;
}

void affine_scalar(const double* w, const double* bias, const double* x, double* y,
                   std::size_t rows, std::size_t cols) {
  for (std::size_t r = 0; r < rows; ++r) {
    y[r] = bias[r] + dot_scalar(w + r * cols, x, cols);
  }
}

void transpose_mul_scalar(const double* w, const double* v, double* out,
                          std::size_t rows, std::size_t cols) {
  for (std::size_t c = 0; c < cols; ++c) out[c] = 0.0;
  for (std::size_t r = 0; r < rows; ++r) {
    const double vr = v[r];
    const double* row = w + r * cols;
    for (std::size_t c = 0; c < cols; ++c) out[c] += vr * row[c];
  }
}

void axpy_scalar(double alpha, const double* x, double* y, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) y[i] += alpha * x[i];
}

void rank1_update_scalar(double alpha, const double* u, const double* v, double* a,
                         std::size_t rows, std::size_t cols) {
  for (std::size_t r = 0; r < rows; ++r) {
    axpy_scalar(alpha * u[r], v, a + r * cols, cols);
  }
}

}  // namespace

const KernelTable& scalar_table() {
  static const KernelTable table{Isa::scalar,         dot_scalar,  affine_scalar,
                                 transpose_mul_scalar, axpy_scalar, rank1_update_scalar};
  return table;
}

}  // namespace cameo::kernels
