#include "robustcode/calibration.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "robustcode/kernels.hpp"
#include "robustcode/prob.hpp"
#include "robustcode/rng.hpp"

namespace robustcode {
namespace {

constexpr std::size_t kChunk = 256;  // fixed sample-to-seed chunking

void check_confidence(double confidence) {
  if (!(confidence > 0.0 && confidence < 1.0))
    throw std::invalid_argument("calibration: confidence outside (0,1)");
}

}  // namespace

double median(Vec values) {
  if (values.empty()) throw std::invalid_argument("median: empty");
  std::sort(values.begin(), values.end());
  const std::size_t n = values.size();
  if (n % 2 == 1) return values[n / 2];
  return 0.5 * (values[n / 2 - 1] + values[n / 2]);
}

double median_abs(const Vec& values) {
  Vec a(values.size());
  for (std::size_t i = 0; i < values.size(); ++i) a[i] = std::fabs(values[i]);
  return median(std::move(a));
}

double sigma_convention(const Vec& codeword) {
  if (codeword.empty()) throw std::invalid_argument("sigma_convention: empty codeword");
  return median_abs(codeword) / 16.0;
}

double empirical_quantile(Vec samples, double p) {
  if (samples.empty()) throw std::invalid_argument("empirical_quantile: empty");
  std::sort(samples.begin(), samples.end());
  const std::size_t n = samples.size();
  std::size_t k = static_cast<std::size_t>(std::ceil(p * static_cast<double>(n)));
  if (k < 1) k = 1;
  if (k > n) k = n;
  return samples[k - 1];
}

double calibrate_eps(const CodingMatrix& matrix, double sigma, double confidence,
                     CalibrationMethod method, int mc_samples, std::uint64_t seed) {
  check_confidence(confidence);
  if (!(sigma >= 0.0)) throw std::invalid_argument("calibrate_eps: sigma < 0");
  if (sigma == 0.0) return 0.0;

  const std::size_t m = matrix.block_length();
  const std::size_t r = m - matrix.signal_length();

  if (method == CalibrationMethod::Analytic)
    return sigma * std::sqrt(prob::chi2_quantile(confidence, static_cast<double>(r)));

  if (mc_samples < 1) throw std::invalid_argument("calibrate_eps: mc_samples < 1");
  // unit-sigma samples of ||Q^T z||; the quantile scales linearly in sigma
  Vec samples(mc_samples);
  Vec z(m), w(r);
  for (int s = 0; s < mc_samples; s += static_cast<int>(kChunk)) {
    Rng chunk_rng(mix_seed(seed, static_cast<std::uint64_t>(s / kChunk)));
    for (std::size_t t = 0; t < kChunk && s + static_cast<int>(t) < mc_samples; ++t) {
      chunk_rng.fill_normal(z.data(), m);
      kernels::gemv_t(matrix.q.data.data(), m, r, z.data(), w.data());
      samples[s + t] = std::sqrt(kernels::nrm2sq(w.data(), r));
    }
  }
  return sigma * empirical_quantile(std::move(samples), confidence);
}

CalibrationReport calibrate_lambdas(const CodingMatrix& matrix, double sigma, double confidence,
                                    CalibrationMethod method, int mc_samples,
                                    std::uint64_t seed) {
  check_confidence(confidence);
  if (!(sigma >= 0.0)) throw std::invalid_argument("calibrate_lambdas: sigma < 0");

  const std::size_t m = matrix.block_length();
  const std::size_t r = m - matrix.signal_length();

  CalibrationReport report;
  report.confidence = confidence;
  report.method = method;
  report.mc_samples = (method == CalibrationMethod::MonteCarlo) ? mc_samples : 0;

  // s_i = sigma * ||Q_{i,.}||; unit-sigma copy drives the Monte Carlo sup
  Vec s_unit(m);
  for (std::size_t i = 0; i < m; ++i)
    s_unit[i] = std::sqrt(kernels::nrm2sq(matrix.q.row(i), r));
  report.s.resize(m);
  for (std::size_t i = 0; i < m; ++i) report.s[i] = sigma * s_unit[i];

  if (method == CalibrationMethod::Analytic) {
    report.lambda_scalar = std::sqrt(2.0 * std::log(static_cast<double>(m)));
  } else {
    if (mc_samples < 1) throw std::invalid_argument("calibrate_lambdas: mc_samples < 1");
    Vec samples(mc_samples);
    Vec z(m), w(r), v(m);
    for (int s = 0; s < mc_samples; s += static_cast<int>(kChunk)) {
      Rng chunk_rng(mix_seed(seed, 0x1a3bdULL + static_cast<std::uint64_t>(s / kChunk)));
      for (std::size_t t = 0; t < kChunk && s + static_cast<int>(t) < mc_samples; ++t) {
        chunk_rng.fill_normal(z.data(), m);
        kernels::gemv_t(matrix.q.data.data(), m, r, z.data(), w.data());
        kernels::gemv_n(matrix.q.data.data(), m, r, w.data(), v.data());
        double sup = 0.0;
        for (std::size_t i = 0; i < m; ++i) {
          if (s_unit[i] > 0.0) sup = std::max(sup, std::fabs(v[i]) / s_unit[i]);
        }
        samples[s + t] = sup;
      }
    }
    report.lambda_scalar = empirical_quantile(std::move(samples), confidence);
  }

  report.lambdas.resize(m);
  for (std::size_t i = 0; i < m; ++i) report.lambdas[i] = report.lambda_scalar * report.s[i];
  report.eps = calibrate_eps(matrix, sigma, confidence, method, mc_samples, seed);
  return report;
}

}  // namespace robustcode
