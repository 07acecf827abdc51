#include "robustcode/bench.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <limits>
#include <stdexcept>
#include <thread>

#include <json.hpp>

#include "robustcode/kernels.hpp"
#include "robustcode/matrixgen.hpp"
#include "robustcode/rng.hpp"

namespace robustcode {
namespace {

constexpr double kZeroEntry = 1e-12;  // codeword entries below this can't carry a sign flip

double l2_error(const Vec& a, const Vec& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += (a[i] - b[i]) * (a[i] - b[i]);
  return std::sqrt(s);
}

double ratio_with_convention(double err, double baseline) {
  if (baseline == 0.0)
    return err == 0.0 ? 1.0 : std::numeric_limits<double>::infinity();
  return err / baseline;
}

std::string fmt17(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

DecoderOutcome make_outcome(const DecodeResult& result, const Vec& x, double err_ideal,
                            double err_oracle, double zero_floor) {
  DecoderOutcome out;
  out.err = l2_error(result.x_hat, x);
  if (out.err <= zero_floor) out.err = 0.0;
  out.rho_ideal = ratio_with_convention(out.err, err_ideal);
  out.rho_oracle = ratio_with_convention(out.err, err_oracle);
  out.converged = result.diagnostics.converged;
  return out;
}

}  // namespace

std::size_t ExperimentConfig::gross_count() const {
  return static_cast<std::size_t>(std::llround(corruption_rate * static_cast<double>(m)));
}

void ExperimentConfig::validate() const {
  if (n < 1 || m <= n) throw std::invalid_argument("experiment: need m > n >= 1");
  if (!(corruption_rate >= 0.0 && corruption_rate < 1.0))
    throw std::invalid_argument("experiment: rho outside [0,1)");
  if (gross_count() > m - n) throw std::invalid_argument("experiment: k > m - n");
  if (trials < 1) throw std::invalid_argument("experiment: trials < 1");
  if (!(confidence > 0.0 && confidence < 1.0))
    throw std::invalid_argument("experiment: confidence outside (0,1)");
  if (!use_socp && !use_lp) throw std::invalid_argument("experiment: no decoders selected");
  if (sigma_rule == SigmaRule::Fixed && !(fixed_sigma >= 0.0))
    throw std::invalid_argument("experiment: fixed sigma < 0");
}

CalibrationCache make_calibration_cache(const CodingMatrix& matrix,
                                        const ExperimentConfig& config) {
  CalibrationCache cache;
  const std::uint64_t cal_seed = mix_seed(config.base_seed, 0xca1ULL);
  CalibrationReport report = calibrate_lambdas(matrix, 1.0, config.confidence,
                                               config.calibration, config.mc_samples, cal_seed);
  cache.eps_unit = report.eps;
  cache.lambda_scalar = report.lambda_scalar;
  cache.s_unit = std::move(report.s);
  return cache;
}

TrialRecord run_trial(const CodingMatrix& matrix, const ExperimentConfig& config,
                      const CalibrationCache& cache, int trial_index) {
  const std::size_t m = config.m, n = config.n;
  const std::size_t k = config.gross_count();

  TrialRecord record;
  record.trial_index = trial_index;
  record.seed = mix_seed(config.base_seed, static_cast<std::uint64_t>(trial_index));

  Rng rng_x(mix_seed(record.seed, 1));
  Rng rng_support(mix_seed(record.seed, 2));
  Rng rng_noise(mix_seed(record.seed, 3));

  Signal x{Vec(n)};
  rng_x.fill_normal(x.values.data(), n);
  const Vec codeword = encode(matrix, x);

  const double sigma = (config.sigma_rule == SigmaRule::MedianAbsOver16)
                           ? sigma_convention(codeword)
                           : config.fixed_sigma;

  // uniform k-subset; entries of the codeword too small to flip are resampled
  std::vector<std::size_t> support = rng_support.subset(m, k);
  {
    std::vector<bool> taken(m, false);
    for (std::size_t i : support) taken[i] = true;
    for (std::size_t& i : support) {
      int guard = 0;
      while (std::fabs(codeword[i]) < kZeroEntry && guard++ < static_cast<int>(4 * m)) {
        const std::size_t cand = rng_support.index(m);
        if (!taken[cand]) {
          taken[i] = false;
          taken[cand] = true;
          i = cand;
        }
      }
    }
    std::sort(support.begin(), support.end());
  }

  CorruptionPlan plan;
  plan.gross_support = support;
  plan.noise.resize(m);
  rng_noise.fill_normal(plan.noise.data(), m, sigma);
  plan.sigma = sigma;

  const ReceivedWord y = corrupt(codeword, plan, CorruptionMode::SignFlip);

  // errors at working precision count as exact recovery
  const double zero_floor = 1e-12 * std::sqrt(kernels::nrm2sq(x.values.data(), n));
  auto snapped = [&](double err) { return err <= zero_floor ? 0.0 : err; };

  // the ideal baseline sees the channel without gross errors
  ReceivedWord clean{codeword};
  for (std::size_t i = 0; i < m; ++i) clean.values[i] += plan.noise[i];
  const Vec x_ideal = ideal_ls(matrix, clean);
  const Vec x_oracle = oracle_ls(matrix, y, plan.gross_support);
  record.err_ideal = snapped(l2_error(x_ideal, x.values));
  record.err_oracle = snapped(l2_error(x_oracle, x.values));

  if (config.use_socp) {
    DecoderConfig dc;
    dc.kind = DecoderKind::Socp;
    dc.eps = sigma * cache.eps_unit;
    dc.reproject = config.reproject;
    dc.support_threshold = sigma;
    dc.solver_tol = config.solver_tol;
    record.socp = make_outcome(socp_decode(matrix, y, dc), x.values, record.err_ideal,
                               record.err_oracle, zero_floor);
  }
  if (config.use_lp) {
    DecoderConfig dc;
    dc.kind = DecoderKind::Lp;
    dc.lambdas.resize(m);
    for (std::size_t i = 0; i < m; ++i)
      dc.lambdas[i] = sigma * cache.lambda_scalar * cache.s_unit[i];
    dc.reproject = config.reproject;
    dc.support_threshold = sigma;
    dc.solver_tol = config.solver_tol;
    record.lp = make_outcome(lp_decode(matrix, y, dc), x.values, record.err_ideal,
                             record.err_oracle, zero_floor);
  }
  return record;
}

unsigned bench_thread_count() {
  if (const char* env = std::getenv("ROBUSTCODE_THREADS")) {
    const long v = std::strtol(env, nullptr, 10);
    if (v >= 1) return static_cast<unsigned>(v);
  }
  const unsigned hw = std::thread::hardware_concurrency();
  return hw ? hw : 1;
}

ExperimentResult run_experiment(const ExperimentConfig& config) {
  config.validate();

  CodingMatrix matrix = (config.matrix_kind == MatrixKind::PartialFourier)
                            ? gen_partial_fourier(config.m, config.n, config.base_seed)
                            : gen_gaussian_orthonormal(config.m, config.n, config.base_seed);
  const CalibrationCache cache = make_calibration_cache(matrix, config);

  ExperimentResult result;
  result.records.resize(config.trials);

  const unsigned threads = std::min<unsigned>(bench_thread_count(), config.trials);
  if (threads <= 1) {
    for (int i = 0; i < config.trials; ++i)
      result.records[i] = run_trial(matrix, config, cache, i);
  } else {
    std::atomic<int> next{0};
    auto worker = [&]() {
      while (true) {
        const int i = next.fetch_add(1);
        if (i >= config.trials) break;
        result.records[i] = run_trial(matrix, config, cache, i);
      }
    };
    std::vector<std::thread> pool;
    for (unsigned t = 0; t < threads; ++t) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }

  result.summary = summarize(result.records, config);
  return result;
}

namespace {

std::optional<DecoderSummary> summarize_decoder(
    const std::vector<TrialRecord>& records,
    const std::optional<DecoderOutcome> TrialRecord::*field) {
  Vec rho_ideal, rho_oracle;
  for (const TrialRecord& rec : records) {
    const auto& outcome = rec.*field;
    if (!outcome) return std::nullopt;
    if (!outcome->converged) continue;
    rho_ideal.push_back(outcome->rho_ideal);
    rho_oracle.push_back(outcome->rho_oracle);
  }
  DecoderSummary s;
  s.trials_used = static_cast<int>(rho_ideal.size());
  if (s.trials_used > 0) {
    s.median_rho_ideal = median(rho_ideal);
    s.median_rho_oracle = median(rho_oracle);
    double sum_i = 0.0, sum_o = 0.0;
    for (double v : rho_ideal) sum_i += v;
    for (double v : rho_oracle) sum_o += v;
    s.mean_rho_ideal = sum_i / s.trials_used;
    s.mean_rho_oracle = sum_o / s.trials_used;
  }
  return s;
}

}  // namespace

SummaryStats summarize(const std::vector<TrialRecord>& records, const ExperimentConfig& config) {
  if (records.empty()) throw std::invalid_argument("summarize: no records");
  SummaryStats stats;
  stats.config = config;
  stats.socp = summarize_decoder(records, &TrialRecord::socp);
  stats.lp = summarize_decoder(records, &TrialRecord::lp);
  return stats;
}

std::string records_to_csv(const std::vector<TrialRecord>& records) {
  std::string out = "trial,seed,decoder,err,err_ideal,err_oracle,rho_ideal,rho_oracle,converged\n";
  auto emit = [&](const TrialRecord& rec, const char* name, const DecoderOutcome& oc) {
    out += std::to_string(rec.trial_index);
    out += ',';
    out += std::to_string(rec.seed);
    out += ',';
    out += name;
    out += ',';
    out += fmt17(oc.err);
    out += ',';
    out += fmt17(rec.err_ideal);
    out += ',';
    out += fmt17(rec.err_oracle);
    out += ',';
    out += fmt17(oc.rho_ideal);
    out += ',';
    out += fmt17(oc.rho_oracle);
    out += ',';
    out += oc.converged ? '1' : '0';
    out += '\n';
  };
  for (const TrialRecord& rec : records) {
    if (rec.socp) emit(rec, "socp", *rec.socp);
    if (rec.lp) emit(rec, "lp", *rec.lp);
  }
  return out;
}

namespace {

const char* kind_name(MatrixKind kind) {
  switch (kind) {
    case MatrixKind::GaussianOrthonormal: return "gaussian";
    case MatrixKind::PartialFourier: return "fourier";
    case MatrixKind::Explicit: return "explicit";
  }
  return "unknown";
}

nlohmann::json config_json(const ExperimentConfig& c) {
  nlohmann::json j;
  j["m"] = c.m;
  j["n"] = c.n;
  j["matrix_kind"] = kind_name(c.matrix_kind);
  j["corruption_rate"] = c.corruption_rate;
  j["k"] = c.gross_count();
  j["trials"] = c.trials;
  j["base_seed"] = c.base_seed;
  j["confidence"] = c.confidence;
  j["decoders"] = nlohmann::json::array();
  if (c.use_socp) j["decoders"].push_back("socp");
  if (c.use_lp) j["decoders"].push_back("lp");
  j["reproject"] = c.reproject;
  j["sigma_rule"] =
      c.sigma_rule == SigmaRule::MedianAbsOver16 ? "median_abs_over_16" : "fixed";
  if (c.sigma_rule == SigmaRule::Fixed) j["fixed_sigma"] = c.fixed_sigma;
  j["calibration"] =
      c.calibration == CalibrationMethod::MonteCarlo ? "monte_carlo" : "analytic";
  j["mc_samples"] = c.mc_samples;
  return j;
}

nlohmann::json decoder_json(const DecoderSummary& s) {
  nlohmann::json j;
  j["median_rho_ideal"] = s.median_rho_ideal;
  j["mean_rho_ideal"] = s.mean_rho_ideal;
  j["median_rho_oracle"] = s.median_rho_oracle;
  j["mean_rho_oracle"] = s.mean_rho_oracle;
  j["trials_used"] = s.trials_used;
  return j;
}

}  // namespace

std::string config_to_json(const ExperimentConfig& config) {
  return config_json(config).dump(2) + "\n";
}

std::string summary_to_json(const SummaryStats& summary) {
  nlohmann::json j;
  j["config"] = config_json(summary.config);
  if (summary.socp) j["socp"] = decoder_json(*summary.socp);
  if (summary.lp) j["lp"] = decoder_json(*summary.lp);
  return j.dump(2) + "\n";
}

void write_outputs(const std::string& directory, const ExperimentResult& result) {
  std::filesystem::create_directories(directory);
  const auto dir = std::filesystem::path(directory);
  std::ofstream(dir / "trials.csv") << records_to_csv(result.records);
  std::ofstream(dir / "summary.json") << summary_to_json(result.summary);
  std::ofstream(dir / "config.json") << config_to_json(result.summary.config);
}

}  // namespace robustcode
