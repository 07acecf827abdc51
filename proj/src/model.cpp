#include "robustcode/model.hpp"

#include <cmath>
#include <stdexcept>

namespace robustcode {

void Signal::validate() const {
  if (values.empty()) throw std::invalid_argument("signal: empty block");
  for (double v : values)
    if (!std::isfinite(v)) throw std::invalid_argument("signal: non-finite entry");
}

void CodingMatrix::validate() const {
  const std::size_t m = a.rows, n = a.cols;
  if (n < 1 || m <= n) throw std::invalid_argument("coding matrix: need m > n >= 1");
  if (q.rows != m || q.cols != m - n) throw std::invalid_argument("coding matrix: q shape");

  const double tol = 1e-10;
  if (linalg::max_abs_diff_identity(linalg::gram_matrix(a)) > tol)
    throw std::invalid_argument("coding matrix: columns of a not orthonormal");
  if (linalg::max_abs_diff_identity(linalg::gram_matrix(q)) > tol)
    throw std::invalid_argument("coding matrix: columns of q not orthonormal");
  if (linalg::max_abs(linalg::matmul(linalg::transposed(q), a)) > tol)
    throw std::invalid_argument("coding matrix: q not orthogonal to a");
}

CodingMatrix CodingMatrix::from_parts(Matrix a, Matrix q, MatrixKind kind, std::uint64_t seed) {
  CodingMatrix cm{std::move(a), std::move(q), kind, seed};
  cm.validate();
  return cm;
}

void CorruptionPlan::validate(std::size_t m) const {
  if (gross_support.size() != gross_values.size())
    throw std::invalid_argument("corruption plan: support/value length mismatch");
  if (gross_support.size() > m) throw std::invalid_argument("corruption plan: k > m");
  for (std::size_t i = 0; i < gross_support.size(); ++i) {
    if (gross_support[i] >= m) throw std::invalid_argument("corruption plan: index out of range");
    if (i > 0 && gross_support[i] <= gross_support[i - 1])
      throw std::invalid_argument("corruption plan: support not strictly increasing");
  }
  if (noise.size() != m) throw std::invalid_argument("corruption plan: noise length");
  if (!(sigma >= 0.0)) throw std::invalid_argument("corruption plan: sigma < 0");
}

bool CorruptionPlan::has_exact_sparsity() const {
  for (double v : gross_values)
    if (v == 0.0) return false;
  return true;
}

Vec CorruptionPlan::dense_gross(std::size_t m) const {
  Vec e(m, 0.0);
  for (std::size_t i = 0; i < gross_support.size(); ++i) e[gross_support[i]] = gross_values[i];
  return e;
}

Vec encode(const CodingMatrix& matrix, const Signal& signal) {
  signal.validate();
  if (signal.length() != matrix.signal_length())
    throw std::invalid_argument("signal/matrix shape");
  return linalg::matvec(matrix.a, signal.values);
}

ReceivedWord corrupt(const Vec& codeword, CorruptionPlan& plan, CorruptionMode mode) {
  const std::size_t m = codeword.size();
  if (mode == CorruptionMode::SignFlip) {
    // gross values are implied by the codeword; fill them in first
    plan.gross_values.assign(plan.gross_support.size(), 0.0);
    plan.validate(m);
    for (std::size_t i = 0; i < plan.gross_support.size(); ++i)
      plan.gross_values[i] = -2.0 * codeword[plan.gross_support[i]];
  } else {
    plan.validate(m);
  }

  ReceivedWord y{codeword};
  for (std::size_t i = 0; i < plan.gross_support.size(); ++i)
    y.values[plan.gross_support[i]] += plan.gross_values[i];
  for (std::size_t i = 0; i < m; ++i) y.values[i] += plan.noise[i];
  return y;
}

}  // namespace robustcode
