#include <doctest.h>

#include <cmath>

#include "robustcode/calibration.hpp"
#include "robustcode/kernels.hpp"
#include "robustcode/matrixgen.hpp"
#include "robustcode/prob.hpp"
#include "robustcode/rng.hpp"

using namespace robustcode;

TEST_CASE("sigma convention on constant magnitudes") {
  CHECK(sigma_convention({16.0, -16.0, 16.0}) == 1.0);
  CHECK(sigma_convention(Vec(8, 0.0)) == 0.0);
}

TEST_CASE("sigma convention approaches the normal absolute median") {
  // median |N(0,1)| is the 0.75 quantile of the normal, about 0.6745
  Rng rng(11);
  double total = 0.0;
  const int trials = 50;
  for (int t = 0; t < trials; ++t) {
    Vec word(512);
    rng.fill_normal(word.data(), word.size());
    total += sigma_convention(word);
  }
  const double expected = 0.674489750196 / 16.0;
  CHECK(total / trials == doctest::Approx(expected).epsilon(0.10));
}

TEST_CASE("median uses the midpoint convention") {
  CHECK(median({1.0, 3.0}) == 2.0);
  CHECK(median({1.0, 2.0, 10.0}) == 2.0);
}

TEST_CASE("eps calibration is zero without noise") {
  CodingMatrix cm = gen_gaussian_orthonormal(8, 4, 3);
  CHECK(calibrate_eps(cm, 0.0, 0.95, CalibrationMethod::Analytic) == 0.0);
  CHECK(calibrate_eps(cm, 0.0, 0.95, CalibrationMethod::MonteCarlo, 100) == 0.0);
}

TEST_CASE("analytic eps with one parity dimension is the normal 97.5% quantile") {
  CodingMatrix cm = gen_gaussian_orthonormal(5, 4, 9);
  const double sigma = 0.7;
  const double eps = calibrate_eps(cm, sigma, 0.95, CalibrationMethod::Analytic);
  CHECK(eps == doctest::Approx(sigma * 1.9599639845).epsilon(1e-9));
  // Monte-Carlo quantile of |N(0,1)| agrees to sampling accuracy
  const double eps_mc = calibrate_eps(cm, sigma, 0.95, CalibrationMethod::MonteCarlo, 40000);
  CHECK(eps_mc == doctest::Approx(eps).epsilon(0.03));
}

TEST_CASE("monte-carlo and analytic eps agree at moderate size") {
  CodingMatrix cm = gen_gaussian_orthonormal(64, 32, 5);
  const double a = calibrate_eps(cm, 1.0, 0.95, CalibrationMethod::Analytic);
  const double mc = calibrate_eps(cm, 1.0, 0.95, CalibrationMethod::MonteCarlo, 20000);
  CHECK(mc == doctest::Approx(a).epsilon(0.05));
}

TEST_CASE("lambda calibration basics") {
  CodingMatrix cm = gen_gaussian_orthonormal(32, 16, 7);
  CalibrationReport rep = calibrate_lambdas(cm, 0.0, 0.95, CalibrationMethod::Analytic);
  for (double l : rep.lambdas) CHECK(l == 0.0);

  rep = calibrate_lambdas(cm, 0.5, 0.95, CalibrationMethod::Analytic);
  CHECK(rep.lambda_scalar == doctest::Approx(std::sqrt(2.0 * std::log(32.0))).epsilon(1e-12));
  for (std::size_t i = 0; i < 32; ++i)
    CHECK(rep.lambdas[i] == doctest::Approx(rep.lambda_scalar * rep.s[i]).epsilon(1e-12));
}

TEST_CASE("analytic lambda at the benchmark size") {
  CodingMatrix cm = gen_gaussian_orthonormal(512, 256, 1);
  CalibrationReport rep = calibrate_lambdas(cm, 1.0, 0.95, CalibrationMethod::Analytic);
  CHECK(rep.lambda_scalar == doctest::Approx(3.5322).epsilon(1e-4));
}

TEST_CASE("coordinate projector yields zero and full coordinate scales") {
  const std::size_t m = 6, n = 2;
  Matrix a(m, n);
  a.at(0, 0) = 1.0;
  a.at(1, 1) = 1.0;
  Matrix q = complement_basis(a);
  CodingMatrix cm = CodingMatrix::from_parts(std::move(a), std::move(q), MatrixKind::Explicit, 0);
  CalibrationReport rep = calibrate_lambdas(cm, 2.0, 0.95, CalibrationMethod::Analytic);
  for (std::size_t i = 0; i < m; ++i) {
    const double expected = (i < n) ? 0.0 : 2.0;
    CHECK(rep.s[i] == doctest::Approx(expected).epsilon(1e-9));
  }
  CHECK(rep.lambdas[0] == doctest::Approx(0.0));
}

TEST_CASE("coordinate scales satisfy the row-norm identity") {
  CodingMatrix cm = gen_partial_fourier(24, 10, 3);
  const double sigma = 0.8;
  CalibrationReport rep = calibrate_lambdas(cm, sigma, 0.95, CalibrationMethod::Analytic);
  for (std::size_t i = 0; i < 24; ++i) {
    const double row_a = kernels::nrm2sq(cm.a.row(i), cm.a.cols);
    CHECK(rep.s[i] * rep.s[i] + sigma * sigma * row_a ==
          doctest::Approx(sigma * sigma).epsilon(1e-10));
  }
}

TEST_CASE("calibrated thresholds cover fresh noise at the stated confidence") {
  const std::size_t m = 64, n = 32;
  CodingMatrix cm = gen_gaussian_orthonormal(m, n, 13);
  const double sigma = 0.3;
  const double conf = 0.95;
  const double eps = calibrate_eps(cm, sigma, conf, CalibrationMethod::MonteCarlo, 20000);
  CalibrationReport rep = calibrate_lambdas(cm, sigma, conf, CalibrationMethod::MonteCarlo, 20000);

  Rng rng(10001);
  const int fresh = 4000;
  int eps_hits = 0, lam_hits = 0;
  Vec z(m), w(cm.q.cols), v(m);
  for (int t = 0; t < fresh; ++t) {
    rng.fill_normal(z.data(), m, sigma);
    kernels::gemv_t(cm.q.data.data(), m, cm.q.cols, z.data(), w.data());
    if (std::sqrt(kernels::nrm2sq(w.data(), w.size())) <= eps) ++eps_hits;
    kernels::gemv_n(cm.q.data.data(), m, cm.q.cols, w.data(), v.data());
    bool all = true;
    for (std::size_t i = 0; i < m && all; ++i) all = std::fabs(v[i]) <= rep.lambdas[i];
    if (all) ++lam_hits;
  }
  const double eps_cov = static_cast<double>(eps_hits) / fresh;
  const double lam_cov = static_cast<double>(lam_hits) / fresh;
  CHECK(eps_cov >= conf - 0.03);
  CHECK(lam_cov >= conf - 0.03);
}

TEST_CASE("chi-square upper tail bound holds empirically") {
  // P(Y_d - d >= t sqrt(2d) + t^2) <= exp(-t^2/2), small-sample version
  const int samples = 20000;
  for (int d : {10, 50}) {
    for (double t : {0.5, 1.0, 2.0}) {
      const double threshold = d + t * std::sqrt(2.0 * d) + t * t;
      int exceed = 0;
      Rng rng(mix_seed(0xc21, static_cast<std::uint64_t>(d * 1000 + int(t * 10))));
      for (int s = 0; s < samples; ++s) {
        double y = 0.0;
        for (int j = 0; j < d; ++j) {
          const double g = rng.normal();
          y += g * g;
        }
        if (y >= threshold) ++exceed;
      }
      const double phat = static_cast<double>(exceed) / samples;
      const double se = std::sqrt(phat * (1.0 - phat) / samples);
      CHECK(phat <= std::exp(-t * t / 2.0) + 3.0 * se);
    }
  }
}

TEST_CASE("sphere coordinate-mass lower bound holds empirically") {
  // P(Z_n <= (n/m)(1-t)) <= exp(-n t^2/16) + exp(-m t^2/24)
  const std::size_t m = 100, n = 30;
  const double t = 0.4;
  const int samples = 20000;
  int below = 0;
  Rng rng(0x5fe3);
  Vec x(m);
  for (int s = 0; s < samples; ++s) {
    rng.fill_normal(x.data(), m);
    const double head = kernels::nrm2sq(x.data(), n);
    const double all = kernels::nrm2sq(x.data(), m);
    if (head / all <= (static_cast<double>(n) / m) * (1.0 - t)) ++below;
  }
  const double phat = static_cast<double>(below) / samples;
  const double se = std::sqrt(phat * (1.0 - phat) / samples);
  const double bound = std::exp(-static_cast<double>(n) * t * t / 16.0) +
      std::exp(-static_cast<double>(m) * t * t / 24.0);
  CHECK(phat <= bound + 3.0 * se);
}
