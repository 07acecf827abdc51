#include "kernels_impl.hpp"

#include <cmath>

namespace robustcode::kernels::detail {
namespace {

double dot_scalar(const double* x, const double* y, std::size_t n) {
  double s = 0.0;
  for (std::size_t i = 0; i < n; ++i) s += x[i] * y[i];
  return s;
}

double nrm2sq_scalar(const double* x, std::size_t n) {
  double s = 0.0;
  for (std::size_t i = 0; i < n; ++i) s += x[i] * x[i];
  return s;
}

double l1norm_scalar(const double* x, std::size_t n) {
  double s = 0.0;
  for (std::size_t i = 0; i < n; ++i) s += std::fabs(x[i]);
  return s;
}

double linfnorm_scalar(const double* x, std::size_t n) {
  double s = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double v = std::fabs(x[i]);
    if (v > s) s = v;
  }
  return s;
}

void axpy_scalar(double alpha, const double* x, double* y, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) y[i] += alpha * x[i];
}

void scal_scalar(double alpha, double* x, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) x[i] *= alpha;
}

void gemv_n_scalar(const double* a, std::size_t rows, std::size_t cols, const double* x,
                   double* y) {
  for (std::size_t i = 0; i < rows; ++i) y[i] = dot_scalar(a + i * cols, x, cols);
}

void gemv_t_scalar(const double* a, std::size_t rows, std::size_t cols, const double* x,
                   double* y) {
  for (std::size_t j = 0; j < cols; ++j) y[j] = 0.0;
  for (std::size_t i = 0; i < rows; ++i) axpy_scalar(x[i], a + i * cols, y, cols);
}

void gram_scalar(const double* b, std::size_t rows, std::size_t cols, double* c) {
  for (std::size_t i = 0; i < cols * cols; ++i) c[i] = 0.0;
  // upper triangle via rank-1 row accumulation, then mirror
  for (std::size_t k = 0; k < rows; ++k) {
    const double* row = b + k * cols;
    for (std::size_t i = 0; i < cols; ++i) {
      if (row[i] != 0.0) axpy_scalar(row[i], row + i, c + i * cols + i, cols - i);
    }
  }
  for (std::size_t i = 0; i < cols; ++i)
    for (std::size_t j = i + 1; j < cols; ++j) c[j * cols + i] = c[i * cols + j];
}

}  // namespace

const KernelTable& scalar_table() {
  static const KernelTable table = {dot_scalar,  nrm2sq_scalar, l1norm_scalar,
                                    linfnorm_scalar, axpy_scalar, scal_scalar,
                                    gemv_n_scalar,   gemv_t_scalar, gram_scalar};
  return table;
}

}  // namespace robustcode::kernels::detail
