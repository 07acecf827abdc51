#include "robustcode/rip.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

#include "robustcode/kernels.hpp"
#include "robustcode/rng.hpp"

namespace robustcode::rip {
namespace {

// binomial coefficient saturating at 2^63-1
std::uint64_t binomial(std::size_t n, std::size_t k) {
  if (k > n) return 0;
  k = std::min(k, n - k);
  long double v = 1.0L;
  for (std::size_t i = 0; i < k; ++i) v = v * static_cast<long double>(n - i) / (i + 1);
  if (v > 9.2e18L) return UINT64_MAX;
  return static_cast<std::uint64_t>(v + 0.5L);
}

bool next_combination(std::vector<std::size_t>& c, std::size_t n) {
  const std::size_t k = c.size();
  for (std::size_t i = k; i-- > 0;) {
    if (c[i] < n - k + i) {
      ++c[i];
      for (std::size_t j = i + 1; j < k; ++j) c[j] = c[j - 1] + 1;
      return true;
    }
  }
  return false;
}

Matrix submatrix_cols(const Matrix& phi, const std::vector<std::size_t>& cols, double scale) {
  Matrix s(phi.rows, cols.size());
  for (std::size_t i = 0; i < phi.rows; ++i)
    for (std::size_t j = 0; j < cols.size(); ++j) s.at(i, j) = scale * phi.at(i, cols[j]);
  return s;
}

// smallest/largest singular value of the k-column submatrix
std::pair<double, double> extremal_pair(const Matrix& phi, const std::vector<std::size_t>& cols,
                                        double scale) {
  const Vec sv = linalg::singular_values(submatrix_cols(phi, cols, scale));
  return {sv.back(), sv.front()};
}

}  // namespace

RipReport extremal_singular_values(const Matrix& phi, int k_max, double scale,
                                   const EnumerationOptions& opts) {
  if (k_max < 1 || static_cast<std::size_t>(k_max) > phi.cols)
    throw std::invalid_argument("extremal_singular_values: k_max out of range");

  std::uint64_t total = 0;
  for (int k = 1; k <= k_max; ++k) {
    const std::uint64_t c = binomial(phi.cols, static_cast<std::size_t>(k));
    total = (c == UINT64_MAX || total + c < total) ? UINT64_MAX : total + c;
  }
  const bool over_budget = total > opts.budget;
  if (over_budget && !opts.allow_sampling)
    throw std::invalid_argument(
        "extremal_singular_values: subset budget exceeded; enable sampled mode");

  RipReport report;
  report.k_max = k_max;
  report.scale = scale;
  report.sampled = over_budget;
  report.a.assign(k_max, 0.0);
  report.b.assign(k_max, 0.0);
  report.delta.assign(k_max, 0.0);

  Rng rng(opts.seed);
  for (int k = 1; k <= k_max; ++k) {
    double a_k = std::numeric_limits<double>::infinity();
    double b_k = 0.0;
    if (!over_budget) {
      std::vector<std::size_t> cols(k);
      std::iota(cols.begin(), cols.end(), 0);
      do {
        auto [lo, hi] = extremal_pair(phi, cols, scale);
        a_k = std::min(a_k, lo);
        b_k = std::max(b_k, hi);
      } while (next_combination(cols, phi.cols));
    } else {
      for (int s = 0; s < opts.sample_count; ++s) {
        auto cols = rng.subset(phi.cols, static_cast<std::size_t>(k));
        auto [lo, hi] = extremal_pair(phi, cols, scale);
        a_k = std::min(a_k, lo);
        b_k = std::max(b_k, hi);
      }
    }
    report.a[k - 1] = a_k;
    report.b[k - 1] = b_k;
    report.delta[k - 1] = std::max(1.0 - a_k * a_k, b_k * b_k - 1.0);
  }
  return report;
}

double restricted_orthogonality(const Matrix& phi, int k, int kp,
                                const EnumerationOptions& opts) {
  if (k < 1 || kp < 1 || static_cast<std::size_t>(k + kp) > phi.cols)
    throw std::invalid_argument("restricted_orthogonality: k + kp out of range");

  const std::size_t m = phi.cols;
  const std::uint64_t ck = binomial(m, static_cast<std::size_t>(k));
  const std::uint64_t ckp = binomial(m - k, static_cast<std::size_t>(kp));
  const bool over_budget =
      ck == UINT64_MAX || ckp == UINT64_MAX || ck > opts.budget / std::max<std::uint64_t>(ckp, 1);
  if (over_budget && !opts.allow_sampling)
    throw std::invalid_argument(
        "restricted_orthogonality: subset budget exceeded; enable sampled mode");

  auto pair_theta = [&](const std::vector<std::size_t>& t, const std::vector<std::size_t>& tp) {
    // largest singular value of Phi_T^T Phi_T' via the Gram route
    Matrix cross(t.size(), tp.size());
    for (std::size_t i = 0; i < t.size(); ++i)
      for (std::size_t j = 0; j < tp.size(); ++j) {
        double s = 0.0;
        for (std::size_t row = 0; row < phi.rows; ++row)
          s += phi.at(row, t[i]) * phi.at(row, tp[j]);
        cross.at(i, j) = s;
      }
    const Vec eig = linalg::jacobi_eigenvalues(linalg::gram_matrix(cross));
    return std::sqrt(std::max(eig.back(), 0.0));
  };

  double theta = 0.0;
  if (!over_budget) {
    std::vector<std::size_t> t(k);
    std::iota(t.begin(), t.end(), 0);
    do {
      std::vector<std::size_t> rest;
      rest.reserve(m - k);
      for (std::size_t i = 0, ti = 0; i < m; ++i) {
        if (ti < t.size() && t[ti] == i) {
          ++ti;
          continue;
        }
        rest.push_back(i);
      }
      std::vector<std::size_t> sel(kp);
      std::iota(sel.begin(), sel.end(), 0);
      do {
        std::vector<std::size_t> tp(kp);
        for (int j = 0; j < kp; ++j) tp[j] = rest[sel[j]];
        theta = std::max(theta, pair_theta(t, tp));
      } while (next_combination(sel, rest.size()));
    } while (next_combination(t, m));
  } else {
    Rng rng(opts.seed);
    for (int s = 0; s < opts.sample_count; ++s) {
      auto both = rng.subset(m, static_cast<std::size_t>(k + kp));
      // random split of the drawn support
      std::vector<std::size_t> t(both.begin(), both.begin() + k);
      std::vector<std::size_t> tp(both.begin() + k, both.end());
      theta = std::max(theta, pair_theta(t, tp));
    }
  }
  return theta;
}

Verdict check_recovery_lemma(const Matrix& phi, const Vec& x, const Vec& x_tilde, double eps,
                             const EnumerationOptions& opts) {
  if (x.size() != phi.cols || x_tilde.size() != phi.cols)
    throw std::invalid_argument("check_recovery_lemma: shape");
  if (!(eps >= 0.0)) throw std::invalid_argument("check_recovery_lemma: eps < 0");

  int k = 0;
  for (double v : x)
    if (v != 0.0) ++k;
  if (k == 0 || 3 * k > static_cast<int>(phi.cols)) return Verdict::NotApplicable;

  const double l1_x = kernels::l1norm(x.data(), x.size());
  const double l1_xt = kernels::l1norm(x_tilde.data(), x_tilde.size());
  if (l1_xt > l1_x * (1.0 + 1e-12) + 1e-12) return Verdict::NotApplicable;

  Vec diff(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) diff[i] = x_tilde[i] - x[i];
  const Vec img = linalg::matvec(phi, diff);
  const double img_norm = std::sqrt(kernels::nrm2sq(img.data(), img.size()));
  if (img_norm > 2.0 * eps + 1e-12) return Verdict::NotApplicable;

  const RipReport rep = extremal_singular_values(phi, 3 * k, 1.0, opts);
  const double denom = rep.a[3 * k - 1] - rep.b[2 * k - 1] / std::sqrt(2.0);
  if (denom <= 0.0) return Verdict::NotApplicable;

  const double err = std::sqrt(kernels::nrm2sq(diff.data(), diff.size()));
  const double bound = std::sqrt(6.0) * eps / denom;
  return err <= bound + 1e-9 ? Verdict::Pass : Verdict::Fail;
}

Verdict check_ds_lemma(const Matrix& phi, const Vec& h, const std::vector<std::size_t>& t0,
                       int kp, const EnumerationOptions& opts) {
  const std::size_t m = phi.cols;
  if (h.size() != m) throw std::invalid_argument("check_ds_lemma: shape");
  const int k = static_cast<int>(t0.size());
  if (kp < 1 || k + kp > static_cast<int>(m))
    throw std::invalid_argument("check_ds_lemma: k + kp out of range");

  std::vector<bool> in_t0(m, false);
  for (std::size_t i : t0) {
    if (i >= m) throw std::invalid_argument("check_ds_lemma: t0 index");
    in_t0[i] = true;
  }

  // T1: the kp largest |h| outside T0, ties broken by lowest index
  std::vector<std::size_t> outside;
  for (std::size_t i = 0; i < m; ++i)
    if (!in_t0[i]) outside.push_back(i);
  std::stable_sort(outside.begin(), outside.end(), [&](std::size_t lhs, std::size_t rhs) {
    return std::fabs(h[lhs]) > std::fabs(h[rhs]);
  });
  std::vector<bool> in_t01 = in_t0;
  for (int j = 0; j < kp && j < static_cast<int>(outside.size()); ++j) in_t01[outside[j]] = true;

  const RipReport rep = extremal_singular_values(phi, k + kp, 1.0, opts);
  const double a2 = rep.a[k + kp - 1] * rep.a[k + kp - 1];
  if (!(a2 > 0.0)) return Verdict::NotApplicable;
  const double theta = restricted_orthogonality(phi, kp, k + kp, opts);

  double h_t01_sq = 0.0, h_sq = 0.0, l1_outside = 0.0;
  for (std::size_t i = 0; i < m; ++i) {
    h_sq += h[i] * h[i];
    if (in_t01[i]) h_t01_sq += h[i] * h[i];
    if (!in_t0[i]) l1_outside += std::fabs(h[i]);
  }

  // || Phi_T01^T Phi h ||_2
  const Vec img = linalg::matvec(phi, h);
  double corr_sq = 0.0;
  for (std::size_t j = 0; j < m; ++j) {
    if (!in_t01[j]) continue;
    double s = 0.0;
    for (std::size_t row = 0; row < phi.rows; ++row) s += phi.at(row, j) * img[row];
    corr_sq += s * s;
  }

  const double lhs1 = std::sqrt(h_t01_sq);
  const double rhs1 = std::sqrt(corr_sq) / a2 +
                      theta / (a2 * std::sqrt(static_cast<double>(kp))) * l1_outside;
  const double lhs2 = h_sq;
  const double rhs2 = h_t01_sq + l1_outside * l1_outside / static_cast<double>(kp);

  const bool ok1 = rhs1 - lhs1 >= -1e-9;
  const bool ok2 = rhs2 - lhs2 >= -1e-9;
  return (ok1 && ok2) ? Verdict::Pass : Verdict::Fail;
}

bool check_theorem_hypothesis(const RipReport& report, int k, std::size_t m, std::size_t n,
                              HypothesisKind which) {
  if (k < 1 || 3 * k > report.k_max)
    throw std::invalid_argument("check_theorem_hypothesis: need k_max >= 3k");
  const double d3k = report.delta[3 * k - 1];
  const double d2k = report.delta[2 * k - 1];
  const double ratio = static_cast<double>(m) / static_cast<double>(n);
  if (which == HypothesisKind::Socp) return d3k + 0.5 * d2k < 0.5 * (ratio - 1.0);
  return d3k + d2k < ratio - 1.0;
}

}  // namespace robustcode::rip
