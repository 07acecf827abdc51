#pragma once

#include <cstdint>
#include <map>
#include <utility>
#include <vector>

#include "robustcode/linalg.hpp"

// Exact brute-force restricted-isometry diagnostics on small matrices:
// extremal singular values over all k-column submatrices, restricted
// orthogonality constants over disjoint support pairs, and numerical
// checks of the recovery bounds built from them. Enumeration is capped by
// a subset budget; an optional sampled mode reports non-certified bounds.

namespace robustcode::rip {

inline constexpr std::uint64_t kDefaultSubsetBudget = 2'000'000;

struct EnumerationOptions {
  std::uint64_t budget = kDefaultSubsetBudget;
  bool allow_sampling = false;   // fall back to random subsets over budget
  int sample_count = 20000;      // subsets per k in sampled mode
  std::uint64_t seed = 0x5a317ULL;
};

struct RipReport {
  int k_max = 0;
  Vec a;      // a[k-1]: smallest restricted singular value at sparsity k
  Vec b;      // b[k-1]: largest
  Vec delta;  // max(1 - a_k^2, b_k^2 - 1)
  std::map<std::pair<int, int>, double> theta;
  double scale = 1.0;   // factor applied to phi before enumeration
  bool sampled = false; // true when bounds are Monte-Carlo, not certified
};

/// a_k, b_k, delta_k for k = 1..k_max of (scale * phi).
RipReport extremal_singular_values(const Matrix& phi, int k_max, double scale = 1.0,
                                   const EnumerationOptions& opts = {});

/// theta_{k,kp}: max largest singular value of Phi_T^T Phi_{T'} over
/// disjoint supports |T| = k, |T'| = kp.
double restricted_orthogonality(const Matrix& phi, int k, int kp,
                                const EnumerationOptions& opts = {});

enum class Verdict { Pass, Fail, NotApplicable };

/// Tube-and-cone recovery bound: any x_tilde with no larger l1 norm and
/// image within 2*eps of Phi x stays within sqrt(6) eps / (a_3k - b_2k/sqrt 2).
Verdict check_recovery_lemma(const Matrix& phi, const Vec& x, const Vec& x_tilde, double eps,
                             const EnumerationOptions& opts = {});

/// Dantzig-selector support bounds for h with anchor set t0 and padding kp.
Verdict check_ds_lemma(const Matrix& phi, const Vec& h, const std::vector<std::size_t>& t0,
                       int kp, const EnumerationOptions& opts = {});

enum class HypothesisKind { Socp, Lp };

/// Evaluates the sparsity condition on the isometry constants:
/// Socp: delta_3k + delta_2k/2 < (m/n - 1)/2;  Lp: delta_3k + delta_2k < m/n - 1.
bool check_theorem_hypothesis(const RipReport& report, int k, std::size_t m, std::size_t n,
                              HypothesisKind which);

}  // namespace robustcode::rip
