#pragma once

#include <vector>

#include "robustcode/linalg.hpp"

// Internal convex solvers for the two decoding programs:
//
//   solve_l1_ball:  min ||e||_1  s.t.  ||b - G e||_2 <= eps
//   solve_l1_box:   min ||e||_1  s.t.  |b - G e|_i  <= lam_i  for all i
//
// The ball program with eps > 0 runs a log-barrier Newton method on the
// slack formulation (variables e, u with |e| <= u and one quadratic
// constraint). The box program, and the eps = 0 ball limit, run a
// primal-dual path-following interior-point method on the equivalent
// linear program; coordinates with lam_i = 0 become equality rows, reduced
// to an independent subset beforehand.

namespace robustcode {

struct ToleranceConfig {
  double feasibility = 1e-8;    // absolute constraint slack allowed on return
  double objective_rel = 1e-8;  // certified relative duality gap
  int max_iterations = 200;     // interior-point/barrier iteration cap
};

struct SolveDiagnostics {
  int iterations = 0;
  double primal_objective = 0.0;
  double max_constraint_violation = 0.0;
  bool converged = false;
};

struct L1Solution {
  Vec e_hat;
  SolveDiagnostics diagnostics;
};

L1Solution solve_l1_ball(const Matrix& g, const Vec& b, double eps,
                         const ToleranceConfig& tol = {});

L1Solution solve_l1_box(const Matrix& g, const Vec& b, const Vec& lam,
                        const ToleranceConfig& tol = {});

}  // namespace robustcode
