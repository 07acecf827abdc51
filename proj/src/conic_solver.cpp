#include "robustcode/conic_solver.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "robustcode/kernels.hpp"

namespace robustcode {
namespace {

using kernels::axpy;
using kernels::dot;
using kernels::l1norm;
using kernels::linfnorm;
using kernels::nrm2sq;

double vec_linf(const Vec& v) { return v.empty() ? 0.0 : linfnorm(v.data(), v.size()); }
double vec_l1(const Vec& v) { return v.empty() ? 0.0 : l1norm(v.data(), v.size()); }
double vec_sum(const Vec& v) {
  double s = 0.0;
  for (double x : v) s += x;
  return s;
}

// Least-norm point satisfying the independent rows of g e = b. Rows are an
// independent subset; returns empty on a failed factorization.
Vec least_norm_solution(const Matrix& g, const Vec& b, const std::vector<std::size_t>& rows) {
  const std::size_t m = g.cols, q = rows.size();
  Vec e(m, 0.0);
  if (q == 0) return e;
  Matrix gramr(q, q);
  for (std::size_t i = 0; i < q; ++i)
    for (std::size_t j = i; j < q; ++j)
      gramr.at(i, j) = gramr.at(j, i) = dot(g.row(rows[i]), g.row(rows[j]), m);
  auto l = linalg::cholesky(gramr);
  if (!l) return {};
  Vec rhs(q);
  for (std::size_t i = 0; i < q; ++i) rhs[i] = b[rows[i]];
  Vec w = linalg::cholesky_solve(*l, rhs);
  for (std::size_t i = 0; i < q; ++i) axpy(w[i], g.row(rows[i]), e.data(), m);
  return e;
}

// Newton systems here are s.p.d. but can be badly scaled near the central
// path boundary; factor with a positivity-only pivot floor and fall back to
// tiny diagonal bumps, never a relative pivot cutoff.
std::optional<Matrix> cholesky_with_bump(Matrix h) {
  double max_diag = 0.0;
  for (std::size_t i = 0; i < h.rows; ++i) max_diag = std::max(max_diag, h.at(i, i));
  for (double bump : {0.0, 1e-18, 1e-15, 1e-12}) {
    if (bump > 0.0)
      for (std::size_t i = 0; i < h.rows; ++i) h.at(i, i) += bump * max_diag;
    if (auto l = linalg::cholesky(h, 0.0)) return l;
  }
  return std::nullopt;
}

// ---------------------------------------------------------------------------
// Primal-dual interior-point method for
//   min ||e||_1  s.t.  |b - g e|_i <= lam_i,
// where rows with lam_i ~ 0 are handled as equalities (reduced to an
// independent subset). Inputs are pre-normalized to unit scale.
// ---------------------------------------------------------------------------

struct IpmOutcome {
  Vec e;
  int iterations = 0;
  bool certified = false;
};

IpmOutcome ipm_l1(const Matrix& g, const Vec& b, const Vec& lam, const ToleranceConfig& tol) {
  const std::size_t m = g.cols;
  const std::size_t nrows = g.rows;
  constexpr double kEqThreshold = 1e-12;

  std::vector<std::size_t> ineq, eq;
  for (std::size_t i = 0; i < nrows; ++i) (lam[i] > kEqThreshold ? ineq : eq).push_back(i);
  const std::size_t p = ineq.size();

  // independent equality rows; eq_src maps them back to rows of g
  Matrix emat;
  Vec d;
  std::vector<std::size_t> eq_src;
  if (!eq.empty()) {
    Matrix sub(eq.size(), m);
    for (std::size_t i = 0; i < eq.size(); ++i)
      std::copy(g.row(eq[i]), g.row(eq[i]) + m, sub.row(i));
    const auto ind = linalg::independent_rows(sub);
    emat = Matrix(ind.size(), m);
    d.resize(ind.size());
    eq_src.resize(ind.size());
    for (std::size_t i = 0; i < ind.size(); ++i) {
      std::copy(sub.row(ind[i]), sub.row(ind[i]) + m, emat.row(i));
      d[i] = b[eq[ind[i]]];
      eq_src[i] = eq[ind[i]];
    }
  }
  const std::size_t q = emat.rows;

  IpmOutcome out;
  out.e = least_norm_solution(g, b, linalg::independent_rows(g));
  if (out.e.empty()) {
    out.e.assign(m, 0.0);
    return out;
  }

  Vec e = out.e;
  Vec ge(nrows);
  kernels::gemv_n(g.data.data(), nrows, m, e.data(), ge.data());
  // strict interior required on inequality rows
  for (std::size_t k = 0; k < p; ++k) {
    const std::size_t i = ineq[k];
    if (std::fabs(ge[i] - b[i]) >= lam[i] * (1.0 - 1e-12)) return out;
  }

  const double e_max = vec_linf(e);
  Vec u(m);
  for (std::size_t i = 0; i < m; ++i)
    u[i] = 1.05 * std::fabs(e[i]) + 0.1 * std::max(e_max, 0.1);
  const double obj0 = vec_sum(u);

  const double n_ineq = static_cast<double>(2 * m + 2 * p);
  Vec su1(m), su2(m), sg1(p), sg2(p), nu(q, 0.0);
  Vec fu1(m), fu2(m), fg1(p), fg2(p);

  auto refresh_f = [&](const Vec& ev, const Vec& uv, const Vec& gev, Vec& f1, Vec& f2, Vec& h1,
                       Vec& h2) {
    for (std::size_t i = 0; i < m; ++i) {
      f1[i] = ev[i] - uv[i];
      f2[i] = -ev[i] - uv[i];
    }
    for (std::size_t k = 0; k < p; ++k) {
      const std::size_t i = ineq[k];
      h1[k] = gev[i] - b[i] - lam[i];
      h2[k] = -gev[i] + b[i] - lam[i];
    }
  };
  refresh_f(e, u, ge, fu1, fu2, fg1, fg2);
  for (std::size_t i = 0; i < m; ++i) {
    su1[i] = -1.0 / fu1[i];
    su2[i] = -1.0 / fu2[i];
  }
  for (std::size_t k = 0; k < p; ++k) {
    sg1[k] = -1.0 / fg1[k];
    sg2[k] = -1.0 / fg2[k];
  }

  const double mu = 10.0;
  Vec rdual_e(m), rdual_u(m), rpri(q);
  Vec rc_u1(m), rc_u2(m), rc_g1(p), rc_g2(p);

  // residuals for given state; returns squared norm
  auto residuals = [&](const Vec& su1v, const Vec& su2v, const Vec& sg1v, const Vec& sg2v,
                       const Vec& nuv, const Vec& uv, const Vec& gev, const Vec& f1,
                       const Vec& f2, const Vec& h1, const Vec& h2, double t, Vec& rde, Vec& rdu,
                       Vec& rp, Vec& c1, Vec& c2, Vec& c3, Vec& c4) {
    for (std::size_t i = 0; i < m; ++i) {
      rde[i] = su1v[i] - su2v[i];
      rdu[i] = 1.0 - su1v[i] - su2v[i];
    }
    for (std::size_t k = 0; k < p; ++k) {
      const double w = sg1v[k] - sg2v[k];
      if (w != 0.0) axpy(w, g.row(ineq[k]), rde.data(), m);
    }
    for (std::size_t j = 0; j < q; ++j)
      if (nuv[j] != 0.0) axpy(nuv[j], emat.row(j), rde.data(), m);
    for (std::size_t j = 0; j < q; ++j) rp[j] = gev[eq_src[j]] - d[j];
    const double invt = 1.0 / t;
    for (std::size_t i = 0; i < m; ++i) {
      c1[i] = -su1v[i] * f1[i] - invt;
      c2[i] = -su2v[i] * f2[i] - invt;
    }
    for (std::size_t k = 0; k < p; ++k) {
      c3[k] = -sg1v[k] * h1[k] - invt;
      c4[k] = -sg2v[k] * h2[k] - invt;
    }
    (void)uv;
    double s = nrm2sq(rde.data(), m) + nrm2sq(rdu.data(), m);
    if (q) s += nrm2sq(rp.data(), q);
    s += nrm2sq(c1.data(), m) + nrm2sq(c2.data(), m);
    if (p) s += nrm2sq(c3.data(), p) + nrm2sq(c4.data(), p);
    return s;
  };

  Vec de(m), du(m), dnu(q);
  Vec dsu1(m), dsu2(m), dsg1(p), dsg2(p);
  Vec gde(nrows);
  Matrix h_e;
  Matrix bscaled;

  for (int iter = 0; iter < tol.max_iterations; ++iter) {
    out.iterations = iter;
    double eta = 0.0;
    for (std::size_t i = 0; i < m; ++i) eta -= fu1[i] * su1[i] + fu2[i] * su2[i];
    for (std::size_t k = 0; k < p; ++k) eta -= fg1[k] * sg1[k] + fg2[k] * sg2[k];
    const double t = mu * n_ineq / eta;

    const double res2 =
        residuals(su1, su2, sg1, sg2, nu, u, ge, fu1, fu2, fg1, fg2, t, rdual_e, rdual_u, rpri,
                  rc_u1, rc_u2, rc_g1, rc_g2);

    const double obj = vec_sum(u);
    double smax = 0.0;
    smax = std::max(smax, vec_linf(su1));
    smax = std::max(smax, vec_linf(su2));
    smax = std::max(smax, vec_linf(sg1));
    smax = std::max(smax, vec_linf(sg2));
    smax = std::max(smax, vec_linf(nu));
    const bool gap_ok = eta <= tol.objective_rel * obj + 1e-15 * (1.0 + obj0);
    const bool dual_ok =
        std::max(vec_linf(rdual_e), vec_linf(rdual_u)) <= 1e-9 * (1.0 + smax);
    const bool pri_ok = vec_linf(rpri) <= 1e-9 * (1.0 + vec_linf(d));
    if (gap_ok && dual_ok && pri_ok) {
      out.certified = true;
      break;
    }

    // Newton direction: reduce to an m x m system in de.
    Vec sx(m), dratio(m), rhs_e(m), rhs_u(m);
    for (std::size_t i = 0; i < m; ++i) {
      const double d1 = -su1[i] / fu1[i];
      const double d2 = -su2[i] / fu2[i];
      sx[i] = 4.0 * d1 * d2 / (d1 + d2);
      dratio[i] = (d2 - d1) / (d1 + d2);
      const double qu1 = rc_u1[i] / fu1[i];
      const double qu2 = rc_u2[i] / fu2[i];
      rhs_e[i] = -rdual_e[i] - (qu1 - qu2);
      rhs_u[i] = -rdual_u[i] + qu1 + qu2;
    }
    for (std::size_t k = 0; k < p; ++k) {
      const double w = rc_g1[k] / fg1[k] - rc_g2[k] / fg2[k];
      if (w != 0.0) axpy(-w, g.row(ineq[k]), rhs_e.data(), m);
    }
    Vec rhs_p(m);
    for (std::size_t i = 0; i < m; ++i) rhs_p[i] = rhs_e[i] - dratio[i] * rhs_u[i];

    bool solved = false;
    if (p > 0) {
      // H_e = diag(sx) + sum_k dg_k g_k g_k^T via a scaled-row Gram product
      if (bscaled.rows != p || bscaled.cols != m) bscaled = Matrix(p, m);
      for (std::size_t k = 0; k < p; ++k) {
        const double dg = -sg1[k] / fg1[k] - sg2[k] / fg2[k];
        const double* src = g.row(ineq[k]);
        double* dst = bscaled.row(k);
        const double s = std::sqrt(dg);
        for (std::size_t c = 0; c < m; ++c) dst[c] = s * src[c];
      }
      if (h_e.rows != m) h_e = Matrix(m, m);
      kernels::gram(bscaled.data.data(), p, m, h_e.data.data());
      for (std::size_t i = 0; i < m; ++i) h_e.at(i, i) += sx[i];

      auto l = cholesky_with_bump(h_e);
      if (l) {
        if (q == 0) {
          de = linalg::cholesky_solve(*l, rhs_p);
        } else {
          Vec hr = linalg::cholesky_solve(*l, rhs_p);
          Matrix hie(q, m);  // rows: H^{-1} E^T columns
          for (std::size_t j = 0; j < q; ++j) {
            Vec col(emat.row(j), emat.row(j) + m);
            Vec sol = linalg::cholesky_solve(*l, col);
            std::copy(sol.begin(), sol.end(), hie.row(j));
          }
          Matrix schur(q, q);
          for (std::size_t i2 = 0; i2 < q; ++i2)
            for (std::size_t j2 = i2; j2 < q; ++j2)
              schur.at(i2, j2) = schur.at(j2, i2) = dot(emat.row(i2), hie.row(j2), m);
          auto ls = cholesky_with_bump(schur);
          if (ls) {
            Vec rhs_nu(q);
            for (std::size_t j = 0; j < q; ++j) rhs_nu[j] = dot(emat.row(j), hr.data(), m) + rpri[j];
            dnu = linalg::cholesky_solve(*ls, rhs_nu);
            Vec tmp = rhs_p;
            for (std::size_t j = 0; j < q; ++j) axpy(-dnu[j], emat.row(j), tmp.data(), m);
            de = linalg::cholesky_solve(*l, tmp);
            solved = true;
          }
        }
        if (q == 0) solved = true;
      }
    } else {
      // H_e diagonal
      if (q == 0) {
        for (std::size_t i = 0; i < m; ++i) de[i] = rhs_p[i] / sx[i];
        solved = true;
      } else {
        Matrix w(q, m);
        for (std::size_t j = 0; j < q; ++j) {
          const double* src = emat.row(j);
          double* dst = w.row(j);
          for (std::size_t c = 0; c < m; ++c) dst[c] = src[c] / std::sqrt(sx[c]);
        }
        Matrix schur(q, q);
        for (std::size_t i2 = 0; i2 < q; ++i2)
          for (std::size_t j2 = i2; j2 < q; ++j2)
            schur.at(i2, j2) = schur.at(j2, i2) = dot(w.row(i2), w.row(j2), m);
        auto ls = cholesky_with_bump(schur);
        if (ls) {
          Vec hr(m);
          for (std::size_t i = 0; i < m; ++i) hr[i] = rhs_p[i] / sx[i];
          Vec rhs_nu(q);
          for (std::size_t j = 0; j < q; ++j) rhs_nu[j] = dot(emat.row(j), hr.data(), m) + rpri[j];
          dnu = linalg::cholesky_solve(*ls, rhs_nu);
          Vec tmp = rhs_p;
          for (std::size_t j = 0; j < q; ++j) axpy(-dnu[j], emat.row(j), tmp.data(), m);
          for (std::size_t i = 0; i < m; ++i) de[i] = tmp[i] / sx[i];
          solved = true;
        }
      }
    }
    if (!solved) break;

    for (std::size_t i = 0; i < m; ++i)
      du[i] = (rhs_u[i] - (((-su2[i] / fu2[i]) - (-su1[i] / fu1[i])) * de[i])) /
              ((-su1[i] / fu1[i]) + (-su2[i] / fu2[i]));

    kernels::gemv_n(g.data.data(), nrows, m, de.data(), gde.data());
    for (std::size_t i = 0; i < m; ++i) {
      const double dfu1 = de[i] - du[i];
      const double dfu2 = -de[i] - du[i];
      dsu1[i] = (rc_u1[i] - su1[i] * dfu1) / fu1[i];
      dsu2[i] = (rc_u2[i] - su2[i] * dfu2) / fu2[i];
    }
    for (std::size_t k = 0; k < p; ++k) {
      const double dfg1 = gde[ineq[k]];
      const double dfg2 = -gde[ineq[k]];
      dsg1[k] = (rc_g1[k] - sg1[k] * dfg1) / fg1[k];
      dsg2[k] = (rc_g2[k] - sg2[k] * dfg2) / fg2[k];
    }

    // longest step keeping s > 0 and f < 0
    double alpha = 1.0;
    auto cap_dual = [&](const Vec& s, const Vec& ds) {
      for (std::size_t i = 0; i < s.size(); ++i)
        if (ds[i] < 0.0) alpha = std::min(alpha, -0.99 * s[i] / ds[i]);
    };
    cap_dual(su1, dsu1);
    cap_dual(su2, dsu2);
    cap_dual(sg1, dsg1);
    cap_dual(sg2, dsg2);
    for (std::size_t i = 0; i < m; ++i) {
      const double dfu1 = de[i] - du[i];
      const double dfu2 = -de[i] - du[i];
      if (dfu1 > 0.0) alpha = std::min(alpha, -0.99 * fu1[i] / dfu1);
      if (dfu2 > 0.0) alpha = std::min(alpha, -0.99 * fu2[i] / dfu2);
    }
    for (std::size_t k = 0; k < p; ++k) {
      if (gde[ineq[k]] > 0.0) alpha = std::min(alpha, -0.99 * fg1[k] / gde[ineq[k]]);
      if (-gde[ineq[k]] > 0.0) alpha = std::min(alpha, 0.99 * fg2[k] / gde[ineq[k]]);
    }

    // backtrack on the residual norm
    Vec e_t(m), u_t(m), ge_t(nrows), f1_t(m), f2_t(m), h1_t(p), h2_t(p);
    Vec s1_t(m), s2_t(m), s3_t(p), s4_t(p), nu_t(q);
    bool accepted = false;
    for (int bt = 0; bt < 40; ++bt) {
      for (std::size_t i = 0; i < m; ++i) {
        e_t[i] = e[i] + alpha * de[i];
        u_t[i] = u[i] + alpha * du[i];
        s1_t[i] = su1[i] + alpha * dsu1[i];
        s2_t[i] = su2[i] + alpha * dsu2[i];
      }
      for (std::size_t k = 0; k < p; ++k) {
        s3_t[k] = sg1[k] + alpha * dsg1[k];
        s4_t[k] = sg2[k] + alpha * dsg2[k];
      }
      for (std::size_t j = 0; j < q; ++j) nu_t[j] = nu[j] + alpha * dnu[j];
      for (std::size_t i = 0; i < nrows; ++i) ge_t[i] = ge[i] + alpha * gde[i];
      refresh_f(e_t, u_t, ge_t, f1_t, f2_t, h1_t, h2_t);

      bool interior = true;
      for (std::size_t i = 0; i < m && interior; ++i)
        interior = f1_t[i] < 0.0 && f2_t[i] < 0.0 && s1_t[i] > 0.0 && s2_t[i] > 0.0;
      for (std::size_t k = 0; k < p && interior; ++k)
        interior = h1_t[k] < 0.0 && h2_t[k] < 0.0 && s3_t[k] > 0.0 && s4_t[k] > 0.0;
      if (interior) {
        Vec rde2(m), rdu2(m), rp2(q), c1(m), c2(m), c3(p), c4(p);
        const double res2_t = residuals(s1_t, s2_t, s3_t, s4_t, nu_t, u_t, ge_t, f1_t, f2_t,
                                        h1_t, h2_t, t, rde2, rdu2, rp2, c1, c2, c3, c4);
        if (res2_t <= (1.0 - 0.01 * alpha) * (1.0 - 0.01 * alpha) * res2) {
          accepted = true;
          break;
        }
      }
      alpha *= 0.5;
    }
    if (!accepted) break;

    e.swap(e_t);
    u.swap(u_t);
    ge.swap(ge_t);
    su1.swap(s1_t);
    su2.swap(s2_t);
    sg1.swap(s3_t);
    sg2.swap(s4_t);
    nu.swap(nu_t);
    refresh_f(e, u, ge, fu1, fu2, fg1, fg2);
  }

  out.e = e;
  return out;
}

// ---------------------------------------------------------------------------
// Log-barrier path following for
//   min ||e||_1  s.t.  ||b - g e||_2 <= eps   (eps > 0)
//
// Stages center loosely; optimality is certified independently of the
// centering quality through the dual of the ball-constrained program:
// any nu with ||g^T nu||_inf <= 1 gives the lower bound -b^T nu - eps||nu||.
// The candidate nu = r / (tau (-f_ball)) is rescaled into feasibility and
// the loop stops once the resulting duality gap meets the tolerance.
// ---------------------------------------------------------------------------

struct BallOutcome {
  Vec e;
  int iterations = 0;  // Newton steps
  bool certified = false;
};

BallOutcome pd_l1_ball(const Matrix& g, const Vec& b, double eps, const ToleranceConfig& tol) {
  const std::size_t m = g.cols;
  const std::size_t rdim = g.rows;
  BallOutcome out;

  const Matrix gtg = linalg::gram_matrix(g);
  Vec e = least_norm_solution(g, b, linalg::independent_rows(g));
  if (e.empty()) {
    out.e.assign(m, 0.0);
    return out;
  }
  Vec r(rdim);
  kernels::gemv_n(g.data.data(), rdim, m, e.data(), r.data());
  for (std::size_t i = 0; i < rdim; ++i) r[i] -= b[i];
  if (nrm2sq(r.data(), rdim) >= eps * eps * (1.0 - 1e-10)) {
    out.e = e;
    return out;  // no strictly interior start available
  }

  const double e_max = vec_linf(e);
  Vec u(m);
  for (std::size_t i = 0; i < m; ++i)
    u[i] = 1.05 * std::fabs(e[i]) + 0.1 * std::max(e_max, 0.1);
  const double obj0 = vec_sum(u);

  const double n_constraints = static_cast<double>(2 * m + 1);
  const double mu = 4.0;  // modest stage growth keeps the damped phases short
  double tau = n_constraints / std::max(obj0, 1e-10);

  Vec w(m), grad_e(m), grad_u(m), de(m), du(m), gde(rdim);
  Matrix h(m, m);
  int total_newton = 0;

  auto barrier_value = [&](const Vec& ev, const Vec& uv, double fe, double tau_v) {
    double phi = 0.0;
    for (std::size_t i = 0; i < m; ++i) {
      const double a1 = uv[i] - ev[i];
      const double a2 = uv[i] + ev[i];
      if (a1 <= 0.0 || a2 <= 0.0) return std::numeric_limits<double>::infinity();
      phi += tau_v * uv[i] - std::log(a1) - std::log(a2);
    }
    if (fe >= 0.0) return std::numeric_limits<double>::infinity();
    phi -= std::log(-fe);
    return phi;
  };

  // duality gap from the rescaled dual candidate; w must hold g^T r
  auto certified_gap = [&](double fe) {
    if (!(fe < 0.0)) return std::numeric_limits<double>::infinity();
    const double mult = 1.0 / (tau * (-fe));
    const double scale = std::max(1.0, mult * linfnorm(w.data(), m));
    const double nu_scale = mult / scale;
    const double lower = -nu_scale * dot(b.data(), r.data(), rdim) -
                         eps * nu_scale * std::sqrt(nrm2sq(r.data(), rdim));
    return vec_l1(e) - lower;
  };

  for (int stage = 0; stage < tol.max_iterations; ++stage) {
    // re-derive the residual exactly at each stage start
    kernels::gemv_n(g.data.data(), rdim, m, e.data(), r.data());
    for (std::size_t i = 0; i < rdim; ++i) r[i] -= b[i];

    for (int step = 0; step < 40; ++step) {
      ++total_newton;
      out.iterations = total_newton;

      const double fe = 0.5 * (nrm2sq(r.data(), rdim) - eps * eps);
      kernels::gemv_t(g.data.data(), rdim, m, r.data(), w.data());

      const double gap = certified_gap(fe);
      const double obj = vec_l1(e);
      if (gap <= tol.objective_rel * obj + 1e-15 * (1.0 + obj0)) {
        out.certified = true;
        out.e = e;
        return out;
      }

      Vec sig11(m), sig12(m);
      for (std::size_t i = 0; i < m; ++i) {
        const double ia = 1.0 / (u[i] - e[i]);
        const double ib = 1.0 / (u[i] + e[i]);
        grad_e[i] = ia - ib + w[i] / (-fe);
        grad_u[i] = tau - ia - ib;
        sig11[i] = ia * ia + ib * ib;
        sig12[i] = ib * ib - ia * ia;
      }

      const double c1 = 1.0 / (-fe);
      const double c2 = 1.0 / (fe * fe);
      std::copy(gtg.data.begin(), gtg.data.end(), h.data.begin());
      kernels::scal(c1, h.data.data(), m * m);
      for (std::size_t i = 0; i < m; ++i) {
        if (w[i] != 0.0) axpy(c2 * w[i], w.data(), h.row(i), m);
        h.at(i, i) += sig11[i] - sig12[i] * sig12[i] / sig11[i];
      }
      Vec rhs(m);
      for (std::size_t i = 0; i < m; ++i) rhs[i] = -grad_e[i] + sig12[i] / sig11[i] * grad_u[i];

      auto l = cholesky_with_bump(h);
      if (!l) return out;
      de = linalg::cholesky_solve(*l, rhs);
      for (std::size_t i = 0; i < m; ++i) du[i] = (-grad_u[i] - sig12[i] * de[i]) / sig11[i];

      const double decrement2 =
          -(dot(grad_e.data(), de.data(), m) + dot(grad_u.data(), du.data(), m));
      if (decrement2 / 2.0 <= 1e-5) break;  // loosely centered is enough

      double alpha = 1.0;
      for (std::size_t i = 0; i < m; ++i) {
        const double d1 = de[i] - du[i];
        const double d2 = -de[i] - du[i];
        if (d1 > 0.0) alpha = std::min(alpha, 0.99 * (u[i] - e[i]) / d1);
        if (d2 > 0.0) alpha = std::min(alpha, 0.99 * (u[i] + e[i]) / d2);
      }
      kernels::gemv_n(g.data.data(), rdim, m, de.data(), gde.data());
      const double q1 = nrm2sq(r.data(), rdim);
      const double q2 = dot(r.data(), gde.data(), rdim);
      const double q3 = nrm2sq(gde.data(), rdim);
      auto fe_at = [&](double a) { return 0.5 * (q1 + 2.0 * a * q2 + a * a * q3 - eps * eps); };

      const double phi0 = barrier_value(e, u, fe, tau);
      const double slope = dot(grad_e.data(), de.data(), m) + dot(grad_u.data(), du.data(), m);
      bool accepted = false;
      Vec e_t(m), u_t(m);
      for (int bt = 0; bt < 60; ++bt) {
        const double fet = fe_at(alpha);
        if (fet < 0.0) {
          for (std::size_t i = 0; i < m; ++i) {
            e_t[i] = e[i] + alpha * de[i];
            u_t[i] = u[i] + alpha * du[i];
          }
          const double phit = barrier_value(e_t, u_t, fet, tau);
          if (phit <= phi0 + 0.01 * alpha * slope) {
            accepted = true;
            break;
          }
        }
        alpha *= 0.5;
      }
      if (!accepted) break;
      e.swap(e_t);
      u.swap(u_t);
      axpy(alpha, gde.data(), r.data(), rdim);
    }
    tau *= mu;
  }

  out.e = e;
  return out;
}

}  // namespace

L1Solution solve_l1_ball(const Matrix& g, const Vec& b, double eps, const ToleranceConfig& tol) {
  if (b.size() != g.rows) throw std::invalid_argument("solve_l1_ball: shape");
  if (!(eps >= 0.0)) throw std::invalid_argument("solve_l1_ball: eps < 0");

  L1Solution sol;
  sol.e_hat.assign(g.cols, 0.0);

  const double c0 = std::max(vec_linf(b), eps);
  if (c0 == 0.0) {
    sol.diagnostics.converged = true;
    return sol;
  }
  Vec bn = b;
  kernels::scal(1.0 / c0, bn.data(), bn.size());
  const double eps_n = eps / c0;

  if (std::sqrt(nrm2sq(bn.data(), bn.size())) <= eps_n) {
    // zero is feasible, hence optimal
    sol.diagnostics.converged = true;
    return sol;
  }

  bool certified;
  int iterations;
  if (eps_n == 0.0) {
    Vec lam(g.rows, 0.0);
    IpmOutcome res = ipm_l1(g, bn, lam, tol);
    sol.e_hat = std::move(res.e);
    certified = res.certified;
    iterations = res.iterations;
  } else {
    BallOutcome res = pd_l1_ball(g, bn, eps_n, tol);
    sol.e_hat = std::move(res.e);
    certified = res.certified;
    iterations = res.iterations;
  }
  kernels::scal(c0, sol.e_hat.data(), sol.e_hat.size());

  Vec resid(g.rows);
  kernels::gemv_n(g.data.data(), g.rows, g.cols, sol.e_hat.data(), resid.data());
  for (std::size_t i = 0; i < g.rows; ++i) resid[i] = b[i] - resid[i];
  const double viol = std::max(0.0, std::sqrt(nrm2sq(resid.data(), resid.size())) - eps);

  sol.diagnostics.iterations = iterations;
  sol.diagnostics.primal_objective = vec_l1(sol.e_hat);
  sol.diagnostics.max_constraint_violation = viol;
  sol.diagnostics.converged = certified && viol <= tol.feasibility;
  return sol;
}

L1Solution solve_l1_box(const Matrix& g, const Vec& b, const Vec& lam,
                        const ToleranceConfig& tol) {
  if (b.size() != g.rows || lam.size() != g.rows)
    throw std::invalid_argument("solve_l1_box: shape");
  for (double v : lam)
    if (!(v >= 0.0)) throw std::invalid_argument("solve_l1_box: negative threshold");

  L1Solution sol;
  sol.e_hat.assign(g.cols, 0.0);

  bool zero_feasible = true;
  for (std::size_t i = 0; i < b.size() && zero_feasible; ++i)
    zero_feasible = std::fabs(b[i]) <= lam[i];
  if (zero_feasible) {
    sol.diagnostics.converged = true;
    return sol;
  }

  const double c0 = std::max(vec_linf(b), vec_linf(lam));
  Vec bn = b, ln = lam;
  kernels::scal(1.0 / c0, bn.data(), bn.size());
  kernels::scal(1.0 / c0, ln.data(), ln.size());

  IpmOutcome res = ipm_l1(g, bn, ln, tol);
  sol.e_hat = std::move(res.e);
  kernels::scal(c0, sol.e_hat.data(), sol.e_hat.size());

  Vec resid(g.rows);
  kernels::gemv_n(g.data.data(), g.rows, g.cols, sol.e_hat.data(), resid.data());
  double viol = 0.0;
  for (std::size_t i = 0; i < g.rows; ++i)
    viol = std::max(viol, std::fabs(b[i] - resid[i]) - lam[i]);
  viol = std::max(viol, 0.0);

  sol.diagnostics.iterations = res.iterations;
  sol.diagnostics.primal_objective = vec_l1(sol.e_hat);
  sol.diagnostics.max_constraint_violation = viol;
  sol.diagnostics.converged = res.certified && viol <= tol.feasibility;
  return sol;
}

}  // namespace robustcode
