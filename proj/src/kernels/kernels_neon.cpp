#if defined(__aarch64__)

#include "kernels_impl.hpp"

#include <arm_neon.h>

#include <cmath>

namespace robustcode::kernels::detail {
namespace {

double dot_neon(const double* x, const double* y, std::size_t n) {
  float64x2_t acc0 = vdupq_n_f64(0.0);
  float64x2_t acc1 = vdupq_n_f64(0.0);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    acc0 = vfmaq_f64(acc0, vld1q_f64(x + i), vld1q_f64(y + i));
    acc1 = vfmaq_f64(acc1, vld1q_f64(x + i + 2), vld1q_f64(y + i + 2));
  }
  double s = vaddvq_f64(acc0) + vaddvq_f64(acc1);
  for (; i < n; ++i) s += x[i] * y[i];
  return s;
}

double nrm2sq_neon(const double* x, std::size_t n) { return dot_neon(x, x, n); }

double l1norm_neon(const double* x, std::size_t n) {
  float64x2_t acc = vdupq_n_f64(0.0);
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) acc = vaddq_f64(acc, vabsq_f64(vld1q_f64(x + i)));
  double s = vaddvq_f64(acc);
  for (; i < n; ++i) s += std::fabs(x[i]);
  return s;
}

double linfnorm_neon(const double* x, std::size_t n) {
  float64x2_t best = vdupq_n_f64(0.0);
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) best = vmaxq_f64(best, vabsq_f64(vld1q_f64(x + i)));
  double s = vmaxvq_f64(best);
  for (; i < n; ++i) {
    const double v = std::fabs(x[i]);
    if (v > s) s = v;
  }
  return s;
}

void axpy_neon(double alpha, const double* x, double* y, std::size_t n) {
  const float64x2_t a = vdupq_n_f64(alpha);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    vst1q_f64(y + i, vfmaq_f64(vld1q_f64(y + i), a, vld1q_f64(x + i)));
    vst1q_f64(y + i + 2, vfmaq_f64(vld1q_f64(y + i + 2), a, vld1q_f64(x + i + 2)));
  }
  for (; i < n; ++i) y[i] += alpha * x[i];
}

void scal_neon(double alpha, double* x, std::size_t n) {
  const float64x2_t a = vdupq_n_f64(alpha);
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) vst1q_f64(x + i, vmulq_f64(a, vld1q_f64(x + i)));
  for (; i < n; ++i) x[i] *= alpha;
}

void gemv_n_neon(const double* a, std::size_t rows, std::size_t cols, const double* x, double* y) {
  for (std::size_t i = 0; i < rows; ++i) y[i] = dot_neon(a + i * cols, x, cols);
}

void gemv_t_neon(const double* a, std::size_t rows, std::size_t cols, const double* x, double* y) {
  for (std::size_t j = 0; j < cols; ++j) y[j] = 0.0;
  for (std::size_t i = 0; i < rows; ++i) axpy_neon(x[i], a + i * cols, y, cols);
}

void gram_neon(const double* b, std::size_t rows, std::size_t cols, double* c) {
  for (std::size_t i = 0; i < cols * cols; ++i) c[i] = 0.0;
  for (std::size_t k = 0; k < rows; ++k) {
    const double* row = b + k * cols;
    for (std::size_t i = 0; i < cols; ++i) {
      if (row[i] != 0.0) axpy_neon(row[i], row + i, c + i * cols + i, cols - i);
    }
  }
  for (std::size_t i = 0; i < cols; ++i)
    for (std::size_t j = i + 1; j < cols; ++j) c[j * cols + i] = c[i * cols + j];
}

}  // namespace

const KernelTable& neon_table() {
  static const KernelTable table = {dot_neon,  nrm2sq_neon, l1norm_neon,
                                    linfnorm_neon, axpy_neon, scal_neon,
                                    gemv_n_neon,   gemv_t_neon, gram_neon};
  return table;
}

}  // namespace robustcode::kernels::detail

#endif  // __aarch64__
