#pragma once

#include <cstddef>

// Per-ISA entry points behind the dispatch table in kernels.cpp.

namespace robustcode::kernels::detail {

struct KernelTable {
  double (*dot)(const double*, const double*, std::size_t);
  double (*nrm2sq)(const double*, std::size_t);
  double (*l1norm)(const double*, std::size_t);
  double (*linfnorm)(const double*, std::size_t);
  void (*axpy)(double, const double*, double*, std::size_t);
  void (*scal)(double, double*, std::size_t);
  void (*gemv_n)(const double*, std::size_t, std::size_t, const double*, double*);
  void (*gemv_t)(const double*, std::size_t, std::size_t, const double*, double*);
  void (*gram)(const double*, std::size_t, std::size_t, double*);
};

const KernelTable& scalar_table();

#if defined(ROBUSTCODE_BUILD_AVX2)
const KernelTable& avx2_table();
#endif

#if defined(__aarch64__)
const KernelTable& neon_table();
#endif

}  // namespace robustcode::kernels::detail
