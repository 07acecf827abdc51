#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <vector>

namespace robustcode {

/// Dense row-major matrix of doubles.
struct Matrix {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<double> data;

  Matrix() = default;
  Matrix(std::size_t r, std::size_t c) : rows(r), cols(c), data(r * c, 0.0) {}

  double& at(std::size_t i, std::size_t j) { return data[i * cols + j]; }
  double at(std::size_t i, std::size_t j) const { return data[i * cols + j]; }
  double* row(std::size_t i) { return data.data() + i * cols; }
  const double* row(std::size_t i) const { return data.data() + i * cols; }

  static Matrix identity(std::size_t n);
};

using Vec = std::vector<double>;

namespace linalg {

Vec matvec(const Matrix& a, const Vec& x);    // A x
Vec matvec_t(const Matrix& a, const Vec& x);  // A^T x
Matrix matmul(const Matrix& a, const Matrix& b);
Matrix transposed(const Matrix& a);
Matrix gram_matrix(const Matrix& a);  // A^T A
Matrix slice_cols(const Matrix& a, std::size_t first, std::size_t count);
Matrix delete_rows(const Matrix& a, const std::vector<std::size_t>& sorted_rows);

double max_abs(const Matrix& a);
double max_abs_diff_identity(const Matrix& a);  // max |A - I|

// Cholesky factorization A = L L^T of a symmetric positive definite matrix.
// Returns nullopt if a pivot drops below rel_tol times the largest diagonal.
std::optional<Matrix> cholesky(const Matrix& a, double rel_tol = 1e-13);
Vec cholesky_solve(const Matrix& l, const Vec& b);

// Householder QR with the triangular factor's diagonal forced nonnegative.
// q_full is m x m orthogonal; r is m x n upper triangular (top block).
struct QrResult {
  Matrix q_full;
  Matrix r;
};
QrResult householder_qr(const Matrix& a);

// Eigenvalues of a symmetric matrix by cyclic Jacobi, ascending. Small n only.
Vec jacobi_eigenvalues(const Matrix& s, int max_sweeps = 64);

// Singular values by one-sided Jacobi, descending. Returns cols values
// (zeros padded when cols exceeds rank). Small matrices only.
Vec singular_values(const Matrix& a, int max_sweeps = 64);

// Indices of a maximal linearly independent subset of rows, chosen by
// pivoted Gram-Schmidt. rel_tol is relative to the largest row norm.
std::vector<std::size_t> independent_rows(const Matrix& a, double rel_tol = 1e-10);

}  // namespace linalg
}  // namespace robustcode
