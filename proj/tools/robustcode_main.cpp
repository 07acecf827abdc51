// robustcode: encode/decode real-valued blocks through channels with sparse
// gross corruption plus dense small errors, benchmark the decoders, and
// compute restricted-isometry diagnostics.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "robustcode/bench.hpp"
#include "robustcode/calibration.hpp"
#include "robustcode/decoders.hpp"
#include "robustcode/matrixgen.hpp"
#include "robustcode/rip.hpp"

namespace {

using namespace robustcode;

Vec read_vector(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open: " + path);
  Vec v;
  double x;
  while (in >> x) v.push_back(x);
  return v;
}

void write_vector(const Vec& v, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open for write: " + path);
  char buf[64];
  for (double x : v) {
    std::snprintf(buf, sizeof(buf), "%.17g\n", x);
    out << buf;
  }
}

MatrixKind parse_kind(const std::string& s) {
  if (s == "gaussian") return MatrixKind::GaussianOrthonormal;
  if (s == "fourier") return MatrixKind::PartialFourier;
  throw CLI::ValidationError("matrix kind must be gaussian|fourier");
}

int cmd_genmatrix(const std::string& kind, std::size_t m, std::size_t n, std::uint64_t seed,
                  const std::string& out) {
  const MatrixKind k = parse_kind(kind);
  CodingMatrix matrix = (k == MatrixKind::PartialFourier) ? gen_partial_fourier(m, n, seed)
                                                          : gen_gaussian_orthonormal(m, n, seed);
  save_matrix(matrix, out);
  std::cout << "wrote " << out << " (m=" << m << ", n=" << n << ", kind=" << kind << ")\n";
  return 0;
}

int cmd_encode(const std::string& matrix_path, const std::string& in, const std::string& out) {
  CodingMatrix matrix = load_matrix(matrix_path);
  Signal x{read_vector(in)};
  write_vector(encode(matrix, x), out);
  return 0;
}

struct DecodeArgs {
  std::string matrix_path, in, out, ehat_out;
  std::string decoder = "socp";
  double eps = -1.0;
  double lambda_scalar = -1.0;
  double sigma = -1.0;
  double confidence = 0.95;
  int mc_samples = kDefaultMcSamples;
  bool reproject = false;
  bool analytic = false;
};

int cmd_decode(const DecodeArgs& args) {
  CodingMatrix matrix = load_matrix(args.matrix_path);
  ReceivedWord y{read_vector(args.in)};
  const std::size_t m = matrix.block_length();
  if (y.values.size() != m) throw std::runtime_error("received word length != m");

  const CalibrationMethod method =
      args.analytic ? CalibrationMethod::Analytic : CalibrationMethod::MonteCarlo;

  DecoderConfig config;
  config.reproject = args.reproject;
  if (args.sigma >= 0.0) config.support_threshold = args.sigma;

  DecodeResult result;
  if (args.decoder == "socp") {
    config.kind = DecoderKind::Socp;
    if (args.eps >= 0.0)
      config.eps = args.eps;
    else if (args.sigma >= 0.0)
      config.eps = calibrate_eps(matrix, args.sigma, args.confidence, method, args.mc_samples);
    else
      throw CLI::ValidationError("socp decode needs --eps or --sigma");
    result = socp_decode(matrix, y, config);
  } else if (args.decoder == "lp") {
    config.kind = DecoderKind::Lp;
    if (args.sigma >= 0.0) {
      CalibrationReport rep =
          calibrate_lambdas(matrix, args.sigma, args.confidence, method, args.mc_samples);
      config.lambdas = rep.lambdas;
      if (args.lambda_scalar >= 0.0)
        for (std::size_t i = 0; i < m; ++i)
          config.lambdas[i] = args.lambda_scalar * rep.s[i];
    } else if (args.lambda_scalar >= 0.0) {
      config.lambdas.assign(m, args.lambda_scalar);
    } else {
      throw CLI::ValidationError("lp decode needs --sigma or --lambda");
    }
    result = lp_decode(matrix, y, config);
  } else {
    throw CLI::ValidationError("decoder must be socp|lp");
  }

  write_vector(result.x_hat, args.out);
  if (!args.ehat_out.empty()) write_vector(result.e_hat, args.ehat_out);
  std::cerr << "decode: converged=" << (result.diagnostics.converged ? "yes" : "no")
            << " iterations=" << result.diagnostics.iterations
            << " objective=" << result.diagnostics.primal_objective
            << " reprojected=" << (result.reprojected ? "yes" : "no") << "\n";
  return result.diagnostics.converged ? 0 : 2;
}

struct BenchArgs {
  std::size_t m = 512, n = 256;
  double rho = 0.10;
  int trials = 500;
  std::string matrix = "gaussian";
  std::string decoders = "socp,lp";
  bool reproject = true;
  std::uint64_t seed = 1;
  std::string out = "bench_out";
  double confidence = 0.95;
  int mc_samples = kDefaultMcSamples;
  std::string sigma_rule = "median";
  double fixed_sigma = 0.0;
};

int cmd_bench(const BenchArgs& args) {
  ExperimentConfig config;
  config.m = args.m;
  config.n = args.n;
  config.matrix_kind = parse_kind(args.matrix);
  config.corruption_rate = args.rho;
  config.trials = args.trials;
  config.base_seed = args.seed;
  config.confidence = args.confidence;
  config.use_socp = args.decoders.find("socp") != std::string::npos;
  config.use_lp = args.decoders.find("lp") != std::string::npos;
  config.reproject = args.reproject;
  config.mc_samples = args.mc_samples;
  if (args.sigma_rule == "median") {
    config.sigma_rule = SigmaRule::MedianAbsOver16;
  } else if (args.sigma_rule == "fixed") {
    config.sigma_rule = SigmaRule::Fixed;
    config.fixed_sigma = args.fixed_sigma;
  } else {
    throw CLI::ValidationError("sigma rule must be median|fixed");
  }

  ExperimentResult result = run_experiment(config);
  write_outputs(args.out, result);
  std::cout << summary_to_json(result.summary);
  std::cout << "wrote " << args.out << "/trials.csv, summary.json, config.json\n";
  return 0;
}

int cmd_rip(const std::string& matrix_path, int kmax, int theta_max, bool raw_scale,
            bool sampled) {
  CodingMatrix matrix = load_matrix(matrix_path);
  const std::size_t m = matrix.block_length(), n = matrix.signal_length();
  const Matrix phi = linalg::transposed(matrix.a);
  const double scale =
      raw_scale ? 1.0 : std::sqrt(static_cast<double>(m) / static_cast<double>(n));

  rip::EnumerationOptions opts;
  opts.allow_sampling = sampled;
  rip::RipReport report = rip::extremal_singular_values(phi, kmax, scale, opts);
  for (int k = 1; k <= theta_max; ++k)
    for (int kp = k; k + kp <= theta_max; ++kp)
      report.theta[{k, kp}] = scale * scale * rip::restricted_orthogonality(phi, k, kp, opts);

  nlohmann::json j;
  j["m"] = m;
  j["n"] = n;
  j["k_max"] = report.k_max;
  j["scale"] = report.scale;
  j["sampled"] = report.sampled;
  j["a"] = report.a;
  j["b"] = report.b;
  j["delta"] = report.delta;
  nlohmann::json theta = nlohmann::json::object();
  for (const auto& [key, value] : report.theta)
    theta[std::to_string(key.first) + "," + std::to_string(key.second)] = value;
  j["theta"] = theta;
  std::cout << j.dump(2) << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"robust transmission of real-valued blocks through channels with sparse gross "
               "corruption plus dense small errors"};
  app.require_subcommand(1);

  // genmatrix
  auto* gen = app.add_subcommand("genmatrix", "generate and save a coding matrix");
  std::string gen_kind = "gaussian", gen_out = "matrix.rcm";
  std::size_t gen_m = 512, gen_n = 256;
  std::uint64_t gen_seed = 1;
  gen->add_option("--matrix", gen_kind, "gaussian|fourier");
  gen->add_option("--m", gen_m, "codeword length")->required();
  gen->add_option("--n", gen_n, "block length")->required();
  gen->add_option("--seed", gen_seed, "generator seed");
  gen->add_option("--out", gen_out, "output file")->required();

  // encode
  auto* enc = app.add_subcommand("encode", "apply the coding matrix to a block");
  std::string enc_matrix, enc_in, enc_out;
  enc->add_option("--matrix", enc_matrix, "matrix container file")->required();
  enc->add_option("--in", enc_in, "input block, one value per line")->required();
  enc->add_option("--out", enc_out, "output codeword file")->required();

  // decode
  auto* dec = app.add_subcommand("decode", "recover a block from a received word");
  DecodeArgs dargs;
  dec->add_option("--matrix", dargs.matrix_path, "matrix container file")->required();
  dec->add_option("--in", dargs.in, "received word, one value per line")->required();
  dec->add_option("--out", dargs.out, "recovered block output")->required();
  dec->add_option("--ehat-out", dargs.ehat_out, "gross error estimate output");
  dec->add_option("--decoder", dargs.decoder, "socp|lp");
  dec->add_option("--eps", dargs.eps, "l2 threshold (socp)");
  dec->add_option("--lambda", dargs.lambda_scalar, "threshold scalar (lp)");
  dec->add_option("--sigma", dargs.sigma, "noise scale; enables calibration");
  dec->add_option("--confidence", dargs.confidence, "calibration confidence");
  dec->add_option("--mc-samples", dargs.mc_samples, "calibration Monte-Carlo samples");
  dec->add_flag("--reproject", dargs.reproject, "two-step refit of the support");
  dec->add_flag("--analytic", dargs.analytic, "analytic thresholds instead of Monte Carlo");

  // bench
  auto* ben = app.add_subcommand("bench", "Monte-Carlo benchmark against the baselines");
  BenchArgs bargs;
  ben->add_option("--m", bargs.m, "codeword length");
  ben->add_option("--n", bargs.n, "block length");
  ben->add_option("--rho", bargs.rho, "corruption rate");
  ben->add_option("--trials", bargs.trials, "number of trials");
  ben->add_option("--matrix", bargs.matrix, "gaussian|fourier");
  ben->add_option("--decoders", bargs.decoders, "comma list: socp,lp");
  ben->add_flag("--reproject,!--no-reproject", bargs.reproject, "two-step refinement");
  ben->add_option("--seed", bargs.seed, "base seed");
  ben->add_option("--out", bargs.out, "output directory")->required();
  ben->add_option("--confidence", bargs.confidence, "calibration confidence");
  ben->add_option("--mc-samples", bargs.mc_samples, "calibration samples");
  ben->add_option("--sigma-rule", bargs.sigma_rule, "median|fixed");
  ben->add_option("--fixed-sigma", bargs.fixed_sigma, "sigma for the fixed rule");

  // rip
  auto* rip_cmd = app.add_subcommand("rip", "restricted isometry diagnostics");
  std::string rip_matrix;
  int rip_kmax = 3, rip_theta_max = 4;
  bool rip_raw = false, rip_sampled = false;
  rip_cmd->add_option("--matrix", rip_matrix, "matrix container file")->required();
  rip_cmd->add_option("--kmax", rip_kmax, "largest sparsity level")->required();
  rip_cmd->add_option("--theta-max", rip_theta_max, "compute theta for k+k' up to this");
  rip_cmd->add_flag("--raw", rip_raw, "skip the sqrt(m/n) scaling");
  rip_cmd->add_flag("--sampled", rip_sampled, "sample subsets when over budget");

  CLI11_PARSE(app, argc, argv);

  try {
    if (gen->parsed()) return cmd_genmatrix(gen_kind, gen_m, gen_n, gen_seed, gen_out);
    if (enc->parsed()) return cmd_encode(enc_matrix, enc_in, enc_out);
    if (dec->parsed()) return cmd_decode(dargs);
    if (ben->parsed()) return cmd_bench(bargs);
    if (rip_cmd->parsed()) return cmd_rip(rip_matrix, rip_kmax, rip_theta_max, rip_raw, rip_sampled);
  } catch (const std::exception& ex) {
    std::cerr << "error: " << ex.what() << "\n";
    return 1;
  }
  return 0;
}
