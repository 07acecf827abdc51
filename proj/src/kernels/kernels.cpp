#include "robustcode/kernels.hpp"

#include "kernels_impl.hpp"

namespace robustcode::kernels {
namespace {

using detail::KernelTable;

Isa detect_isa() {
#if defined(ROBUSTCODE_BUILD_AVX2)
  if (__builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma")) return Isa::Avx2;
#endif
#if defined(__aarch64__)
  return Isa::Neon;
#endif
  return Isa::Scalar;
}

const KernelTable* table_for(Isa isa) {
  switch (isa) {
    case Isa::Avx2:
#if defined(ROBUSTCODE_BUILD_AVX2)
      return &detail::avx2_table();
#else
      return nullptr;
#endif
    case Isa::Neon:
#if defined(__aarch64__)
      return &detail::neon_table();
#else
      return nullptr;
#endif
    case Isa::Scalar:
      return &detail::scalar_table();
  }
  return nullptr;
}

struct Dispatch {
  Isa isa;
  const KernelTable* table;
  Dispatch() : isa(detect_isa()), table(table_for(isa)) {}
};

Dispatch& dispatch() {
  static Dispatch d;
  return d;
}

}  // namespace

Isa active_isa() { return dispatch().isa; }

std::string isa_name(Isa isa) {
  switch (isa) {
    case Isa::Scalar: return "scalar";
    case Isa::Avx2: return "avx2";
    case Isa::Neon: return "neon";
  }
  return "unknown";
}

bool force_isa(Isa isa) {
  if (isa != Isa::Scalar && isa != detect_isa()) return false;
  const KernelTable* t = table_for(isa);
  if (t == nullptr) return false;
  dispatch().isa = isa;
  dispatch().table = t;
  return true;
}

void reset_isa() {
  dispatch().isa = detect_isa();
  dispatch().table = table_for(dispatch().isa);
}

double dot(const double* x, const double* y, std::size_t n) { return dispatch().table->dot(x, y, n); }
double nrm2sq(const double* x, std::size_t n) { return dispatch().table->nrm2sq(x, n); }
double l1norm(const double* x, std::size_t n) { return dispatch().table->l1norm(x, n); }
double linfnorm(const double* x, std::size_t n) { return dispatch().table->linfnorm(x, n); }
void axpy(double alpha, const double* x, double* y, std::size_t n) {
  dispatch().table->axpy(alpha, x, y, n);
}
void scal(double alpha, double* x, std::size_t n) { dispatch().table->scal(alpha, x, n); }
void gemv_n(const double* a, std::size_t rows, std::size_t cols, const double* x, double* y) {
  dispatch().table->gemv_n(a, rows, cols, x, y);
}
void gemv_t(const double* a, std::size_t rows, std::size_t cols, const double* x, double* y) {
  dispatch().table->gemv_t(a, rows, cols, x, y);
}
void gram(const double* b, std::size_t rows, std::size_t cols, double* c) {
  dispatch().table->gram(b, rows, cols, c);
}

}  // namespace robustcode::kernels
