#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "robustcode/calibration.hpp"
#include "robustcode/decoders.hpp"
#include "robustcode/model.hpp"

// Monte-Carlo benchmark: fix a coding matrix, then per trial draw a Gaussian
// block, sign-flip a random fraction of the codeword, add Gaussian noise,
// decode with both programs, and compare against the ideal (no gross errors)
// and oracle (known corruption locations) least-squares baselines.

namespace robustcode {

enum class SigmaRule { MedianAbsOver16, Fixed };

struct ExperimentConfig {
  std::size_t m = 512;
  std::size_t n = 256;
  MatrixKind matrix_kind = MatrixKind::GaussianOrthonormal;
  double corruption_rate = 0.10;  // rho
  int trials = 500;
  std::uint64_t base_seed = 1;
  double confidence = 0.95;
  bool use_socp = true;
  bool use_lp = true;
  bool reproject = true;
  SigmaRule sigma_rule = SigmaRule::MedianAbsOver16;
  double fixed_sigma = 0.0;
  CalibrationMethod calibration = CalibrationMethod::MonteCarlo;
  int mc_samples = kDefaultMcSamples;
  ToleranceConfig solver_tol;

  std::size_t gross_count() const;  // k = round(rho * m)
  void validate() const;
};

struct DecoderOutcome {
  double err = 0.0;
  double rho_ideal = 0.0;
  double rho_oracle = 0.0;
  bool converged = false;
};

struct TrialRecord {
  int trial_index = 0;
  std::uint64_t seed = 0;
  double err_ideal = 0.0;
  double err_oracle = 0.0;
  std::optional<DecoderOutcome> socp;
  std::optional<DecoderOutcome> lp;
};

struct DecoderSummary {
  double median_rho_ideal = 0.0;
  double mean_rho_ideal = 0.0;
  double median_rho_oracle = 0.0;
  double mean_rho_oracle = 0.0;
  int trials_used = 0;  // converged trials only
};

struct SummaryStats {
  std::optional<DecoderSummary> socp;
  std::optional<DecoderSummary> lp;
  ExperimentConfig config;
};

/// Scale-free calibration data shared by all trials of one experiment:
/// thresholds at sigma = 1, rescaled by each trial's sigma.
struct CalibrationCache {
  double eps_unit = 0.0;
  double lambda_scalar = 0.0;
  Vec s_unit;
};

CalibrationCache make_calibration_cache(const CodingMatrix& matrix,
                                        const ExperimentConfig& config);

TrialRecord run_trial(const CodingMatrix& matrix, const ExperimentConfig& config,
                      const CalibrationCache& cache, int trial_index);

struct ExperimentResult {
  std::vector<TrialRecord> records;
  SummaryStats summary;
};

ExperimentResult run_experiment(const ExperimentConfig& config);

SummaryStats summarize(const std::vector<TrialRecord>& records, const ExperimentConfig& config);

/// Writes trials.csv, summary.json, config.json into the directory.
void write_outputs(const std::string& directory, const ExperimentResult& result);

std::string config_to_json(const ExperimentConfig& config);
std::string summary_to_json(const SummaryStats& summary);
std::string records_to_csv(const std::vector<TrialRecord>& records);

/// Trial parallelism: ROBUSTCODE_THREADS if set, hardware concurrency otherwise.
unsigned bench_thread_count();

}  // namespace robustcode
