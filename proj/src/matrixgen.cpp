#include "robustcode/matrixgen.hpp"

#include <cmath>
#include <stdexcept>

#include "robustcode/rng.hpp"

namespace robustcode {
namespace {

// Split the full orthogonal factor of X into the first n columns (encoder)
// and the trailing m-n columns (complement basis).
std::pair<Matrix, Matrix> orthonormalize_with_complement(const Matrix& x) {
  const std::size_t m = x.rows, n = x.cols;
  linalg::QrResult qr = linalg::householder_qr(x);
  Matrix a = linalg::slice_cols(qr.q_full, 0, n);
  Matrix q = linalg::slice_cols(qr.q_full, n, m - n);
  return {std::move(a), std::move(q)};
}

}  // namespace

CodingMatrix gen_gaussian_orthonormal(std::size_t m, std::size_t n, std::uint64_t seed) {
  if (n < 1) throw std::invalid_argument("gen_gaussian_orthonormal: n < 1");
  if (m <= n) throw std::invalid_argument("need redundancy");
  Rng rng(seed);
  Matrix x(m, n);
  rng.fill_normal(x.data.data(), x.data.size());
  auto [a, q] = orthonormalize_with_complement(x);
  return CodingMatrix::from_parts(std::move(a), std::move(q), MatrixKind::GaussianOrthonormal,
                                  seed);
}

CodingMatrix gen_partial_fourier(std::size_t m, std::size_t n, std::uint64_t seed) {
  if (n < 1) throw std::invalid_argument("gen_partial_fourier: n < 1");
  if (m <= n) throw std::invalid_argument("need redundancy");
  if (n % 2 != 0) throw std::invalid_argument("gen_partial_fourier: n must be even");
  const std::size_t available = (m - 1) / 2;  // usable frequencies, DC/Nyquist excluded
  if (n / 2 > available)
    throw std::invalid_argument("gen_partial_fourier: not enough frequencies");

  Rng rng(seed);
  std::vector<std::size_t> freq = rng.subset(available, n / 2);  // values 0..available-1

  Matrix x(m, n);
  for (std::size_t j = 0; j < n / 2; ++j) {
    const double f = static_cast<double>(freq[j] + 1);
    for (std::size_t t = 0; t < m; ++t) {
      const double angle = 2.0 * M_PI * f * static_cast<double>(t) / static_cast<double>(m);
      x.at(t, 2 * j) = std::cos(angle);
      x.at(t, 2 * j + 1) = std::sin(angle);
    }
  }
  auto [a, q] = orthonormalize_with_complement(x);
  return CodingMatrix::from_parts(std::move(a), std::move(q), MatrixKind::PartialFourier, seed);
}

Matrix complement_basis(const Matrix& a) {
  if (a.rows <= a.cols) throw std::invalid_argument("complement_basis: need m > n");
  if (linalg::max_abs_diff_identity(linalg::gram_matrix(a)) > 1e-8)
    throw std::invalid_argument("complement_basis: columns not orthonormal");
  linalg::QrResult qr = linalg::householder_qr(a);
  return linalg::slice_cols(qr.q_full, a.cols, a.rows - a.cols);
}

}  // namespace robustcode
