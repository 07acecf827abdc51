#include "robustcode/decoders.hpp"

#include <cmath>
#include <stdexcept>

#include "robustcode/kernels.hpp"

namespace robustcode {
namespace {

// x = A^T (y - e), z = (y - e) - A x: the unique split of y - e into the
// column space of A and its complement.
void finish_decode(const CodingMatrix& matrix, const Vec& y, DecodeResult& result) {
  Vec corrected = y;
  kernels::axpy(-1.0, result.e_hat.data(), corrected.data(), corrected.size());
  result.x_hat = linalg::matvec_t(matrix.a, corrected);
  Vec ax = linalg::matvec(matrix.a, result.x_hat);
  result.z_hat = corrected;
  kernels::axpy(-1.0, ax.data(), result.z_hat.data(), result.z_hat.size());
}

void apply_reprojection(const CodingMatrix& matrix, const ReceivedWord& y,
                        const DecoderConfig& config, DecodeResult& result) {
  ReprojectResult rp = reproject(matrix, y, result.e_hat, config.support_threshold);
  if (rp.refit_ok) {
    result.e_hat = std::move(rp.e_refit);
    finish_decode(matrix, y.values, result);
    result.reprojected = true;
  } else {
    result.reprojected = false;
  }
}

void check_shapes(const CodingMatrix& matrix, const ReceivedWord& y) {
  if (y.values.size() != matrix.block_length())
    throw std::invalid_argument("decode: received word length");
}

}  // namespace

Vec ideal_ls(const CodingMatrix& matrix, const ReceivedWord& y) {
  check_shapes(matrix, y);
  return linalg::matvec_t(matrix.a, y.values);
}

Vec oracle_ls(const CodingMatrix& matrix, const ReceivedWord& y,
              const std::vector<std::size_t>& gross_support) {
  check_shapes(matrix, y);
  const std::size_t m = matrix.block_length(), n = matrix.signal_length();
  if (m - gross_support.size() < n)
    throw std::invalid_argument("oracle_ls: too many deleted rows");

  Matrix a_del = linalg::delete_rows(matrix.a, gross_support);
  Vec y_del;
  y_del.reserve(a_del.rows);
  std::size_t next = 0;
  for (std::size_t i = 0; i < m; ++i) {
    if (next < gross_support.size() && gross_support[next] == i) {
      ++next;
      continue;
    }
    y_del.push_back(y.values[i]);
  }

  Matrix gram = linalg::gram_matrix(a_del);
  auto l = linalg::cholesky(gram);
  if (!l) throw std::runtime_error("oracle system singular");
  return linalg::cholesky_solve(*l, linalg::matvec_t(a_del, y_del));
}

DecodeResult socp_decode(const CodingMatrix& matrix, const ReceivedWord& y,
                         const DecoderConfig& config) {
  check_shapes(matrix, y);
  if (config.kind != DecoderKind::Socp) throw std::invalid_argument("socp_decode: wrong kind");
  if (!(config.eps >= 0.0)) throw std::invalid_argument("socp_decode: eps < 0");

  const Matrix qt = linalg::transposed(matrix.q);
  const Vec qty = linalg::matvec_t(matrix.q, y.values);

  L1Solution sol = solve_l1_ball(qt, qty, config.eps, config.solver_tol);
  DecodeResult result;
  result.e_hat = std::move(sol.e_hat);
  result.diagnostics = sol.diagnostics;
  finish_decode(matrix, y.values, result);
  if (config.reproject) apply_reprojection(matrix, y, config, result);
  return result;
}

DecodeResult lp_decode(const CodingMatrix& matrix, const ReceivedWord& y,
                       const DecoderConfig& config) {
  check_shapes(matrix, y);
  if (config.kind != DecoderKind::Lp) throw std::invalid_argument("lp_decode: wrong kind");
  const std::size_t m = matrix.block_length();
  if (config.lambdas.size() != m) throw std::invalid_argument("lp_decode: lambdas length");

  // projector onto the complement subspace, QQ^T
  const Matrix qt = linalg::transposed(matrix.q);
  Matrix projector(m, m);
  kernels::gram(qt.data.data(), qt.rows, qt.cols, projector.data.data());
  const Vec b = linalg::matvec(projector, y.values);

  L1Solution sol = solve_l1_box(projector, b, config.lambdas, config.solver_tol);
  DecodeResult result;
  result.e_hat = std::move(sol.e_hat);
  result.diagnostics = sol.diagnostics;
  finish_decode(matrix, y.values, result);
  if (config.reproject) apply_reprojection(matrix, y, config, result);
  return result;
}

ReprojectResult reproject(const CodingMatrix& matrix, const ReceivedWord& y, const Vec& e_hat,
                          double support_threshold) {
  check_shapes(matrix, y);
  if (!(support_threshold >= 0.0)) throw std::invalid_argument("reproject: threshold < 0");
  const std::size_t m = matrix.block_length();
  const std::size_t r = m - matrix.signal_length();
  if (e_hat.size() != m) throw std::invalid_argument("reproject: e_hat length");

  std::vector<std::size_t> support;
  for (std::size_t i = 0; i < m; ++i)
    if (std::fabs(e_hat[i]) > support_threshold) support.push_back(i);

  ReprojectResult out;
  if (support.size() > r) {
    // more unknowns than parity observations: restricted system is singular
    out.e_refit = e_hat;
    out.x_hat = linalg::matvec_t(matrix.a, y.values);
    out.refit_ok = false;
    return out;
  }

  out.e_refit.assign(m, 0.0);
  if (!support.empty()) {
    // regress Q^T y onto the selected columns of Q^T; the Gram matrix is
    // (QQ^T) restricted to the support
    const std::size_t s = support.size();
    Matrix gram(s, s);
    for (std::size_t i = 0; i < s; ++i)
      for (std::size_t j = i; j < s; ++j)
        gram.at(i, j) = gram.at(j, i) =
            kernels::dot(matrix.q.row(support[i]), matrix.q.row(support[j]), r);
    auto l = linalg::cholesky(gram);
    if (!l) {
      out.e_refit = e_hat;
      out.x_hat = linalg::matvec_t(matrix.a, y.values);
      out.refit_ok = false;
      return out;
    }
    const Vec qty = linalg::matvec_t(matrix.q, y.values);
    Vec rhs(s);
    for (std::size_t i = 0; i < s; ++i) rhs[i] = kernels::dot(matrix.q.row(support[i]), qty.data(), r);
    Vec w = linalg::cholesky_solve(*l, rhs);
    for (std::size_t i = 0; i < s; ++i) out.e_refit[support[i]] = w[i];
  }

  Vec corrected = y.values;
  kernels::axpy(-1.0, out.e_refit.data(), corrected.data(), corrected.size());
  out.x_hat = linalg::matvec_t(matrix.a, corrected);
  out.refit_ok = true;
  return out;
}

}  // namespace robustcode
