#pragma once

#include <vector>

#include "robustcode/conic_solver.hpp"
#include "robustcode/model.hpp"

// Reconstruction procedures. Both decoders estimate the gross errors first
// (an l1 program over the parity-check observations Q^T y), then recover
// the block by corrected least squares x = A^T (y - e_hat). The optional
// reprojection step debiases the estimate: threshold the support at sigma,
// refit by least squares on the selected coordinates, correct again.

namespace robustcode {

enum class DecoderKind { Socp, Lp };

struct DecoderConfig {
  DecoderKind kind = DecoderKind::Socp;
  double eps = 0.0;     // l2 threshold (Socp)
  Vec lambdas;          // per-coordinate thresholds (Lp), length m
  bool reproject = false;
  double support_threshold = 0.0;  // reprojection cut, typically sigma
  ToleranceConfig solver_tol;
};

struct DecodeResult {
  Vec x_hat;
  Vec e_hat;
  Vec z_hat;
  SolveDiagnostics diagnostics;
  bool reprojected = false;
};

/// Least squares assuming no gross errors: x = A^T y.
Vec ideal_ls(const CodingMatrix& matrix, const ReceivedWord& y);

/// Least squares after deleting the rows listed in gross_support.
Vec oracle_ls(const CodingMatrix& matrix, const ReceivedWord& y,
              const std::vector<std::size_t>& gross_support);

DecodeResult socp_decode(const CodingMatrix& matrix, const ReceivedWord& y,
                         const DecoderConfig& config);

DecodeResult lp_decode(const CodingMatrix& matrix, const ReceivedWord& y,
                       const DecoderConfig& config);

struct ReprojectResult {
  Vec e_refit;
  Vec x_hat;
  bool refit_ok = false;  // false when the restricted system was rank-deficient
};

ReprojectResult reproject(const CodingMatrix& matrix, const ReceivedWord& y, const Vec& e_hat,
                          double support_threshold);

}  // namespace robustcode
