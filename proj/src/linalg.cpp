#include "robustcode/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "robustcode/kernels.hpp"

namespace robustcode {

Matrix Matrix::identity(std::size_t n) {
  Matrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) m.at(i, i) = 1.0;
  return m;
}

namespace linalg {

Vec matvec(const Matrix& a, const Vec& x) {
  if (x.size() != a.cols) throw std::invalid_argument("matvec: shape");
  Vec y(a.rows);
  kernels::gemv_n(a.data.data(), a.rows, a.cols, x.data(), y.data());
  return y;
}

Vec matvec_t(const Matrix& a, const Vec& x) {
  if (x.size() != a.rows) throw std::invalid_argument("matvec_t: shape");
  Vec y(a.cols);
  kernels::gemv_t(a.data.data(), a.rows, a.cols, x.data(), y.data());
  return y;
}

Matrix matmul(const Matrix& a, const Matrix& b) {
  if (a.cols != b.rows) throw std::invalid_argument("matmul: shape");
  Matrix c(a.rows, b.cols);
  for (std::size_t i = 0; i < a.rows; ++i) {
    double* ci = c.row(i);
    const double* ai = a.row(i);
    for (std::size_t k = 0; k < a.cols; ++k) {
      if (ai[k] != 0.0) kernels::axpy(ai[k], b.row(k), ci, b.cols);
    }
  }
  return c;
}

Matrix transposed(const Matrix& a) {
  Matrix t(a.cols, a.rows);
  for (std::size_t i = 0; i < a.rows; ++i)
    for (std::size_t j = 0; j < a.cols; ++j) t.at(j, i) = a.at(i, j);
  return t;
}

Matrix gram_matrix(const Matrix& a) {
  Matrix g(a.cols, a.cols);
  kernels::gram(a.data.data(), a.rows, a.cols, g.data.data());
  return g;
}

Matrix slice_cols(const Matrix& a, std::size_t first, std::size_t count) {
  if (first + count > a.cols) throw std::invalid_argument("slice_cols: range");
  Matrix s(a.rows, count);
  for (std::size_t i = 0; i < a.rows; ++i)
    for (std::size_t j = 0; j < count; ++j) s.at(i, j) = a.at(i, first + j);
  return s;
}

Matrix delete_rows(const Matrix& a, const std::vector<std::size_t>& sorted_rows) {
  Matrix out(a.rows - sorted_rows.size(), a.cols);
  std::size_t next = 0, oi = 0;
  for (std::size_t i = 0; i < a.rows; ++i) {
    if (next < sorted_rows.size() && sorted_rows[next] == i) {
      ++next;
      continue;
    }
    std::copy(a.row(i), a.row(i) + a.cols, out.row(oi++));
  }
  return out;
}

double max_abs(const Matrix& a) { return kernels::linfnorm(a.data.data(), a.data.size()); }

double max_abs_diff_identity(const Matrix& a) {
  double worst = 0.0;
  for (std::size_t i = 0; i < a.rows; ++i)
    for (std::size_t j = 0; j < a.cols; ++j) {
      const double d = std::fabs(a.at(i, j) - (i == j ? 1.0 : 0.0));
      if (d > worst) worst = d;
    }
  return worst;
}

std::optional<Matrix> cholesky(const Matrix& a, double rel_tol) {
  if (a.rows != a.cols) throw std::invalid_argument("cholesky: not square");
  const std::size_t n = a.rows;
  double max_diag = 0.0;
  for (std::size_t i = 0; i < n; ++i) max_diag = std::max(max_diag, std::fabs(a.at(i, i)));
  const double floor = std::max(max_diag * rel_tol, 0.0);

  Matrix l(n, n);
  for (std::size_t j = 0; j < n; ++j) {
    const double* lj = l.row(j);
    double d = a.at(j, j) - kernels::dot(lj, lj, j);
    if (d <= floor) return std::nullopt;
    const double ljj = std::sqrt(d);
    l.at(j, j) = ljj;
    for (std::size_t i = j + 1; i < n; ++i) {
      const double v = a.at(i, j) - kernels::dot(l.row(i), lj, j);
      l.at(i, j) = v / ljj;
    }
  }
  return l;
}

Vec cholesky_solve(const Matrix& l, const Vec& b) {
  const std::size_t n = l.rows;
  if (b.size() != n) throw std::invalid_argument("cholesky_solve: shape");
  Vec x = b;
  for (std::size_t i = 0; i < n; ++i)
    x[i] = (x[i] - kernels::dot(l.row(i), x.data(), i)) / l.at(i, i);
  for (std::size_t ii = n; ii-- > 0;) {
    double s = x[ii];
    for (std::size_t k = ii + 1; k < n; ++k) s -= l.at(k, ii) * x[k];
    x[ii] = s / l.at(ii, ii);
  }
  return x;
}

QrResult householder_qr(const Matrix& a) {
  const std::size_t m = a.rows, n = a.cols;
  if (m < n) throw std::invalid_argument("householder_qr: rows < cols");
  Matrix r = a;
  // Householder vectors, one per column, stored padded to length m.
  std::vector<Vec> vs;
  std::vector<double> taus;
  vs.reserve(n);
  taus.reserve(n);

  for (std::size_t j = 0; j < n; ++j) {
    Vec v(m, 0.0);
    double norm2 = 0.0;
    for (std::size_t i = j; i < m; ++i) {
      v[i] = r.at(i, j);
      norm2 += v[i] * v[i];
    }
    const double alpha = std::sqrt(norm2);
    double tau = 0.0;
    if (alpha > 0.0) {
      // reflect column j onto -sign(v_j) * alpha * e_j
      const double sign = (v[j] >= 0.0) ? 1.0 : -1.0;
      v[j] += sign * alpha;
      double vn2 = 0.0;
      for (std::size_t i = j; i < m; ++i) vn2 += v[i] * v[i];
      tau = 2.0 / vn2;
      for (std::size_t c = j; c < n; ++c) {
        double w = 0.0;
        for (std::size_t i = j; i < m; ++i) w += v[i] * r.at(i, c);
        w *= tau;
        for (std::size_t i = j; i < m; ++i) r.at(i, c) -= w * v[i];
      }
    }
    vs.push_back(std::move(v));
    taus.push_back(tau);
    for (std::size_t i = j + 1; i < m; ++i) r.at(i, j) = 0.0;
  }

  // Accumulate Q = H_0 H_1 ... H_{n-1} applied to the identity.
  Matrix q = Matrix::identity(m);
  for (std::size_t jj = n; jj-- > 0;) {
    const Vec& v = vs[jj];
    const double tau = taus[jj];
    if (tau == 0.0) continue;
    for (std::size_t c = 0; c < m; ++c) {
      double w = 0.0;
      for (std::size_t i = jj; i < m; ++i) w += v[i] * q.at(i, c);
      w *= tau;
      for (std::size_t i = jj; i < m; ++i) q.at(i, c) -= w * v[i];
    }
  }

  // Sign convention: nonnegative diagonal of the triangular factor.
  for (std::size_t j = 0; j < n; ++j) {
    if (r.at(j, j) < 0.0) {
      for (std::size_t c = j; c < n; ++c) r.at(j, c) = -r.at(j, c);
      for (std::size_t i = 0; i < m; ++i) q.at(i, j) = -q.at(i, j);
    }
  }
  return {std::move(q), std::move(r)};
}

Vec jacobi_eigenvalues(const Matrix& s, int max_sweeps) {
  if (s.rows != s.cols) throw std::invalid_argument("jacobi_eigenvalues: not square");
  const std::size_t n = s.rows;
  Matrix a = s;
  for (int sweep = 0; sweep < max_sweeps; ++sweep) {
    double off = 0.0;
    for (std::size_t p = 0; p < n; ++p)
      for (std::size_t q = p + 1; q < n; ++q) off += a.at(p, q) * a.at(p, q);
    if (off <= 1e-30 * std::max(1.0, max_abs(a) * max_abs(a))) break;
    for (std::size_t p = 0; p < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        const double apq = a.at(p, q);
        if (apq == 0.0) continue;
        const double app = a.at(p, p), aqq = a.at(q, q);
        const double theta = (aqq - app) / (2.0 * apq);
        const double t = (theta >= 0.0 ? 1.0 : -1.0) /
                         (std::fabs(theta) + std::sqrt(theta * theta + 1.0));
        const double c = 1.0 / std::sqrt(t * t + 1.0);
        const double sj = t * c;
        for (std::size_t k = 0; k < n; ++k) {
          const double akp = a.at(k, p), akq = a.at(k, q);
          a.at(k, p) = c * akp - sj * akq;
          a.at(k, q) = sj * akp + c * akq;
        }
        for (std::size_t k = 0; k < n; ++k) {
          const double apk = a.at(p, k), aqk = a.at(q, k);
          a.at(p, k) = c * apk - sj * aqk;
          a.at(q, k) = sj * apk + c * aqk;
        }
      }
    }
  }
  Vec eig(n);
  for (std::size_t i = 0; i < n; ++i) eig[i] = a.at(i, i);
  std::sort(eig.begin(), eig.end());
  return eig;
}

Vec singular_values(const Matrix& a, int max_sweeps) {
  const std::size_t n = a.cols;
  Matrix w = a;  // rotate columns until pairwise orthogonal
  const double scale = std::max(max_abs(a), 1e-300);
  for (int sweep = 0; sweep < max_sweeps; ++sweep) {
    bool rotated = false;
    for (std::size_t p = 0; p < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        double app = 0.0, aqq = 0.0, apq = 0.0;
        for (std::size_t i = 0; i < w.rows; ++i) {
          app += w.at(i, p) * w.at(i, p);
          aqq += w.at(i, q) * w.at(i, q);
          apq += w.at(i, p) * w.at(i, q);
        }
        if (std::fabs(apq) <= 1e-15 * scale * scale) continue;
        if (std::fabs(apq) <= 1e-14 * std::sqrt(app * aqq)) continue;
        rotated = true;
        const double theta = (aqq - app) / (2.0 * apq);
        const double t = (theta >= 0.0 ? 1.0 : -1.0) /
                         (std::fabs(theta) + std::sqrt(theta * theta + 1.0));
        const double c = 1.0 / std::sqrt(t * t + 1.0);
        const double s = t * c;
        for (std::size_t i = 0; i < w.rows; ++i) {
          const double wip = w.at(i, p), wiq = w.at(i, q);
          w.at(i, p) = c * wip - s * wiq;
          w.at(i, q) = s * wip + c * wiq;
        }
      }
    }
    if (!rotated) break;
  }
  Vec sv(n);
  for (std::size_t j = 0; j < n; ++j) {
    double s = 0.0;
    for (std::size_t i = 0; i < w.rows; ++i) s += w.at(i, j) * w.at(i, j);
    sv[j] = std::sqrt(s);
  }
  std::sort(sv.begin(), sv.end(), std::greater<double>());
  return sv;
}

std::vector<std::size_t> independent_rows(const Matrix& a, double rel_tol) {
  const std::size_t nrows = a.rows, ncols = a.cols;
  Matrix work = a;
  std::vector<double> norm2(nrows);
  std::vector<bool> used(nrows, false);
  double best0 = 0.0;
  for (std::size_t i = 0; i < nrows; ++i) {
    norm2[i] = kernels::nrm2sq(work.row(i), ncols);
    best0 = std::max(best0, norm2[i]);
  }
  const double cutoff = best0 * rel_tol * rel_tol;
  std::vector<std::size_t> picked;
  for (std::size_t step = 0; step < std::min(nrows, ncols); ++step) {
    std::size_t pivot = nrows;
    double best = cutoff;
    for (std::size_t i = 0; i < nrows; ++i) {
      if (!used[i] && norm2[i] > best) {
        best = norm2[i];
        pivot = i;
      }
    }
    if (pivot == nrows) break;
    used[pivot] = true;
    picked.push_back(pivot);
    const double inv = 1.0 / std::sqrt(norm2[pivot]);
    kernels::scal(inv, work.row(pivot), ncols);
    for (std::size_t i = 0; i < nrows; ++i) {
      if (used[i]) continue;
      const double proj = kernels::dot(work.row(i), work.row(pivot), ncols);
      if (proj != 0.0) kernels::axpy(-proj, work.row(pivot), work.row(i), ncols);
      norm2[i] = kernels::nrm2sq(work.row(i), ncols);
    }
  }
  std::sort(picked.begin(), picked.end());
  return picked;
}

}  // namespace linalg
}  // namespace robustcode
