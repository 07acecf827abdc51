#pragma once

// Scalar probability helpers: normal quantile/CDF, regularized incomplete
// gamma, chi-square quantile. Deterministic rational approximations plus
// one refinement step, accurate to ~1e-14.

namespace robustcode::prob {

double normal_cdf(double x);
double normal_quantile(double p);  // p in (0,1)

double regularized_gamma_p(double a, double x);

double chi2_cdf(double x, double dof);
double chi2_quantile(double p, double dof);  // p in (0,1), dof > 0

}  // namespace robustcode::prob
