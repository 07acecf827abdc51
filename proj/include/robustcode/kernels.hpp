#pragma once

#include <cstddef>
#include <string>

// Dense double-precision kernels used by the linear algebra layer.
//
// Every kernel has a scalar reference implementation plus vectorized
// variants (AVX2/FMA on x86-64, NEON on aarch64). The variant is picked
// once at startup from CPU feature detection; force_isa() overrides the
// choice so the variants can be tested against each other.

namespace robustcode::kernels {

enum class Isa { Scalar, Avx2, Neon };

Isa active_isa();
std::string isa_name(Isa isa);

// Returns false if the requested ISA is unavailable on this machine.
bool force_isa(Isa isa);
void reset_isa();

// x.y
double dot(const double* x, const double* y, std::size_t n);
// sum x_i^2
double nrm2sq(const double* x, std::size_t n);
// sum |x_i|
double l1norm(const double* x, std::size_t n);
// max |x_i|
double linfnorm(const double* x, std::size_t n);
// y += alpha * x
void axpy(double alpha, const double* x, double* y, std::size_t n);
// x *= alpha
void scal(double alpha, double* x, std::size_t n);
// y = A x       (A row-major, rows x cols)
void gemv_n(const double* a, std::size_t rows, std::size_t cols, const double* x, double* y);
// y = A^T x     (A row-major, rows x cols)
void gemv_t(const double* a, std::size_t rows, std::size_t cols, const double* x, double* y);
// c = B^T B     (B row-major rows x cols; c is cols x cols, fully filled)
void gram(const double* b, std::size_t rows, std::size_t cols, double* c);

}  // namespace robustcode::kernels
