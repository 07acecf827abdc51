#pragma once

#include <cstdint>
#include <vector>

#include "robustcode/model.hpp"

// Threshold selection for the two decoders. The l2 threshold eps bounds
// ||Q^T z||_2 with the given confidence; the per-coordinate thresholds
// lambda_i = lambda * s_i bound |(QQ^T z)_i| with s_i the coordinate noise
// scales. Both an analytic rule and a Monte-Carlo quantile are provided.

namespace robustcode {

enum class CalibrationMethod { Analytic, MonteCarlo };

struct CalibrationReport {
  double eps = 0.0;
  Vec lambdas;          // lambda_scalar * s_i
  Vec s;                // per-coordinate standard deviations
  double lambda_scalar = 0.0;
  double confidence = 0.0;
  CalibrationMethod method = CalibrationMethod::MonteCarlo;
  int mc_samples = 0;
};

inline constexpr int kDefaultMcSamples = 10000;
inline constexpr std::uint64_t kDefaultCalibrationSeed = 0x5eedca11b4a7e5ULL;

/// Noise scale convention: median(|codeword|) / 16.
double sigma_convention(const Vec& codeword);

/// Quantile of ||Q^T z||_2 for z ~ N(0, sigma^2 I); chi-square analytic or
/// Monte-Carlo empirical.
double calibrate_eps(const CodingMatrix& matrix, double sigma, double confidence,
                     CalibrationMethod method, int mc_samples = kDefaultMcSamples,
                     std::uint64_t seed = kDefaultCalibrationSeed);

/// s_i, the scalar lambda (sup-quantile of |(QQ^T z)_i| / s_i, or the
/// analytic sqrt(2 log m)), and the per-coordinate products.
CalibrationReport calibrate_lambdas(const CodingMatrix& matrix, double sigma, double confidence,
                                    CalibrationMethod method,
                                    int mc_samples = kDefaultMcSamples,
                                    std::uint64_t seed = kDefaultCalibrationSeed);

/// Empirical order-statistic quantile: smallest value with at least
/// ceil(p * N) samples at or below it. Sorts a copy.
double empirical_quantile(Vec samples, double p);

double median(Vec values);          // midpoint convention for even counts
double median_abs(const Vec& values);

}  // namespace robustcode
