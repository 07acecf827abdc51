#include <doctest.h>

#include <cmath>
#include <cstdlib>
#include <sstream>
#include <stdexcept>

#include "robustcode/bench.hpp"
#include "robustcode/matrixgen.hpp"

using namespace robustcode;

namespace {

ExperimentConfig small_config() {
  ExperimentConfig c;
  c.m = 32;
  c.n = 16;
  c.corruption_rate = 0.10;
  c.trials = 6;
  c.base_seed = 42;
  c.mc_samples = 400;
  return c;
}

TrialRecord manual_record(int index, double ri_socp, double ro_socp) {
  TrialRecord r;
  r.trial_index = index;
  r.err_ideal = 1.0;
  r.err_oracle = 1.0;
  DecoderOutcome oc;
  oc.err = ri_socp;
  oc.rho_ideal = ri_socp;
  oc.rho_oracle = ro_socp;
  oc.converged = true;
  r.socp = oc;
  return r;
}

}  // namespace

TEST_CASE("config validation") {
  ExperimentConfig c = small_config();
  CHECK_NOTHROW(c.validate());
  c.corruption_rate = 0.6;  // k = 19 > m - n = 16
  CHECK_THROWS_AS(c.validate(), std::invalid_argument);
  c = small_config();
  c.trials = 0;
  CHECK_THROWS_AS(c.validate(), std::invalid_argument);
  c = small_config();
  c.use_socp = c.use_lp = false;
  CHECK_THROWS_AS(c.validate(), std::invalid_argument);
}

TEST_CASE("k follows the rounding rule") {
  ExperimentConfig c = small_config();
  c.m = 512;
  c.n = 256;
  c.corruption_rate = 0.10;
  CHECK(c.gross_count() == 51);
}

TEST_CASE("summaries of tiny ratio lists") {
  ExperimentConfig c = small_config();
  std::vector<TrialRecord> records = {manual_record(0, 1.0, 1.0), manual_record(1, 3.0, 3.0)};
  SummaryStats s = summarize(records, c);
  REQUIRE(s.socp.has_value());
  CHECK(s.socp->median_rho_ideal == 2.0);
  CHECK(s.socp->mean_rho_ideal == 2.0);

  records.push_back(manual_record(2, 10.0, 2.0));
  records[2].socp->rho_ideal = 10.0;
  s = summarize(records, c);
  CHECK(s.socp->median_rho_ideal == 3.0);
  CHECK(s.socp->mean_rho_ideal == doctest::Approx(14.0 / 3.0));

  CHECK_THROWS_AS(summarize({}, c), std::invalid_argument);
}

TEST_CASE("non-converged trials are excluded and counted") {
  ExperimentConfig c = small_config();
  std::vector<TrialRecord> records = {manual_record(0, 1.0, 1.0), manual_record(1, 5.0, 5.0)};
  records[1].socp->converged = false;
  SummaryStats s = summarize(records, c);
  CHECK(s.socp->trials_used == 1);
  CHECK(s.socp->median_rho_ideal == 1.0);
}

TEST_CASE("clean channel with zero noise gives unit ratios by convention") {
  ExperimentConfig c = small_config();
  c.corruption_rate = 0.0;
  c.sigma_rule = SigmaRule::Fixed;
  c.fixed_sigma = 0.0;
  c.trials = 2;
  ExperimentResult result = run_experiment(c);
  for (const TrialRecord& rec : result.records) {
    CHECK(rec.err_ideal == 0.0);
    REQUIRE(rec.socp.has_value());
    REQUIRE(rec.lp.has_value());
    CHECK(rec.socp->rho_ideal == 1.0);
    CHECK(rec.socp->rho_oracle == 1.0);
    CHECK(rec.lp->rho_ideal == 1.0);
    CHECK(rec.lp->rho_oracle == 1.0);
  }
}

TEST_CASE("trials are deterministic given the seed pair") {
  ExperimentConfig c = small_config();
  CodingMatrix matrix = gen_gaussian_orthonormal(c.m, c.n, c.base_seed);
  CalibrationCache cache = make_calibration_cache(matrix, c);
  TrialRecord a = run_trial(matrix, c, cache, 3);
  TrialRecord b = run_trial(matrix, c, cache, 3);
  CHECK(a.seed == b.seed);
  CHECK(a.err_ideal == b.err_ideal);
  CHECK(a.err_oracle == b.err_oracle);
  CHECK(a.socp->err == b.socp->err);
  CHECK(a.lp->err == b.lp->err);
}

TEST_CASE("experiment outputs are identical across thread counts") {
  ExperimentConfig c = small_config();
  c.trials = 4;
  setenv("ROBUSTCODE_THREADS", "1", 1);
  ExperimentResult serial = run_experiment(c);
  setenv("ROBUSTCODE_THREADS", "2", 1);
  ExperimentResult parallel = run_experiment(c);
  unsetenv("ROBUSTCODE_THREADS");
  CHECK(records_to_csv(serial.records) == records_to_csv(parallel.records));
  CHECK(summary_to_json(serial.summary) == summary_to_json(parallel.summary));
}

TEST_CASE("sign flips land on exactly k nonzero codeword entries") {
  ExperimentConfig c = small_config();
  c.trials = 5;
  ExperimentResult result = run_experiment(c);
  CHECK(result.records.size() == 5);
  // every decoder row carries finite outcomes
  for (const TrialRecord& rec : result.records) {
    CHECK(std::isfinite(rec.socp->rho_ideal));
    CHECK(rec.err_ideal > 0.0);
    CHECK(rec.err_oracle > 0.0);
  }
}

TEST_CASE("csv ratios recompute exactly from stored errors") {
  ExperimentConfig c = small_config();
  c.trials = 3;
  ExperimentResult result = run_experiment(c);
  std::istringstream csv(records_to_csv(result.records));
  std::string line;
  std::getline(csv, line);
  CHECK(line == "trial,seed,decoder,err,err_ideal,err_oracle,rho_ideal,rho_oracle,converged");
  int rows = 0;
  while (std::getline(csv, line)) {
    ++rows;
    std::istringstream ss(line);
    std::string field;
    std::vector<std::string> fields;
    while (std::getline(ss, field, ',')) fields.push_back(field);
    REQUIRE(fields.size() == 9);
    const double err = std::strtod(fields[3].c_str(), nullptr);
    const double err_ideal = std::strtod(fields[4].c_str(), nullptr);
    const double err_oracle = std::strtod(fields[5].c_str(), nullptr);
    const double rho_ideal = std::strtod(fields[6].c_str(), nullptr);
    const double rho_oracle = std::strtod(fields[7].c_str(), nullptr);
    CHECK(rho_ideal == err / err_ideal);
    CHECK(rho_oracle == err / err_oracle);
  }
  CHECK(rows == 6);  // two decoders, three trials
}

TEST_CASE("summary json mirrors the summary statistics") {
  ExperimentConfig c = small_config();
  c.trials = 2;
  ExperimentResult result = run_experiment(c);
  const std::string json = summary_to_json(result.summary);
  CHECK(json.find("\"median_rho_ideal\"") != std::string::npos);
  CHECK(json.find("\"socp\"") != std::string::npos);
  CHECK(json.find("\"lp\"") != std::string::npos);
  CHECK(json.find("\"trials_used\"") != std::string::npos);
}

TEST_CASE("ratio sanity on a small benchmark") {
  ExperimentConfig c;
  c.m = 64;
  c.n = 32;
  c.corruption_rate = 0.10;
  c.trials = 8;
  c.base_seed = 7;
  c.mc_samples = 1000;
  ExperimentResult result = run_experiment(c);
  REQUIRE(result.summary.socp.has_value());
  REQUIRE(result.summary.lp.has_value());
  CHECK(result.summary.socp->trials_used == 8);
  CHECK(result.summary.lp->trials_used == 8);
  CHECK(result.summary.socp->median_rho_ideal > 0.5);
  CHECK(result.summary.socp->median_rho_ideal < 5.0);
  CHECK(result.summary.lp->median_rho_ideal > 0.5);
  CHECK(result.summary.lp->median_rho_ideal < 5.0);
}
