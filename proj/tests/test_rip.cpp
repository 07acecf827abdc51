#include <doctest.h>

#include <cmath>
#include <numeric>
#include <stdexcept>

#include "oracles.hpp"
#include "robustcode/conic_solver.hpp"
#include "robustcode/kernels.hpp"
#include "robustcode/matrixgen.hpp"
#include "robustcode/rip.hpp"
#include "robustcode/rng.hpp"

using namespace robustcode;

namespace {

Matrix random_matrix(std::uint64_t seed, std::size_t r, std::size_t c) {
  Rng rng(seed);
  Matrix m(r, c);
  rng.fill_normal(m.data.data(), m.data.size());
  return m;
}

}  // namespace

TEST_CASE("identity matrix has unit restricted singular values") {
  rip::RipReport rep = rip::extremal_singular_values(Matrix::identity(5), 4);
  for (int k = 1; k <= 4; ++k) {
    CHECK(rep.a[k - 1] == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(rep.b[k - 1] == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(rep.delta[k - 1] == doctest::Approx(0.0).epsilon(1e-12));
  }
}

TEST_CASE("diagonal matrix restricted singular values") {
  Matrix d(2, 2);
  d.at(0, 0) = 1.0;
  d.at(1, 1) = 2.0;
  rip::RipReport rep = rip::extremal_singular_values(d, 2);
  CHECK(rep.a[0] == doctest::Approx(1.0));
  CHECK(rep.b[0] == doctest::Approx(2.0));
  CHECK(rep.a[1] == doctest::Approx(1.0));
  CHECK(rep.b[1] == doctest::Approx(2.0));
}

TEST_CASE("extremal singular values match a direct per-subset eigenvalue oracle") {
  Matrix phi = random_matrix(3, 4, 8);
  rip::RipReport rep = rip::extremal_singular_values(phi, 2);

  // independent route: eigenvalues of the 2x2 gram of every column pair
  double a2 = 1e300, b2 = 0.0;
  for (std::size_t i = 0; i < 8; ++i) {
    for (std::size_t j = i + 1; j < 8; ++j) {
      Matrix sub(4, 2);
      for (std::size_t r = 0; r < 4; ++r) {
        sub.at(r, 0) = phi.at(r, i);
        sub.at(r, 1) = phi.at(r, j);
      }
      Vec eig = linalg::jacobi_eigenvalues(linalg::gram_matrix(sub));
      a2 = std::min(a2, std::sqrt(std::max(eig.front(), 0.0)));
      b2 = std::max(b2, std::sqrt(eig.back()));
    }
  }
  CHECK(rep.a[1] == doctest::Approx(a2).epsilon(1e-9));
  CHECK(rep.b[1] == doctest::Approx(b2).epsilon(1e-9));
}

TEST_CASE("monotonicity of the restricted extremes") {
  Matrix phi = random_matrix(17, 5, 10);
  rip::RipReport rep = rip::extremal_singular_values(phi, 5);
  for (int k = 2; k <= 5; ++k) {
    CHECK(rep.a[k - 1] <= rep.a[k - 2] + 1e-12);
    CHECK(rep.b[k - 1] >= rep.b[k - 2] - 1e-12);
  }
}

TEST_CASE("scaling folds into the restricted extremes") {
  Matrix phi = random_matrix(23, 4, 7);
  const double scale = 1.7;
  rip::RipReport raw = rip::extremal_singular_values(phi, 3, 1.0);
  rip::RipReport scaled = rip::extremal_singular_values(phi, 3, scale);
  for (int k = 1; k <= 3; ++k) {
    CHECK(scaled.a[k - 1] == doctest::Approx(scale * raw.a[k - 1]).epsilon(1e-10));
    CHECK(scaled.b[k - 1] == doctest::Approx(scale * raw.b[k - 1]).epsilon(1e-10));
    const double expected_delta = std::max(1.0 - scaled.a[k - 1] * scaled.a[k - 1],
                                           scaled.b[k - 1] * scaled.b[k - 1] - 1.0);
    CHECK(scaled.delta[k - 1] == doctest::Approx(expected_delta).epsilon(1e-12));
  }
}

TEST_CASE("restricted orthogonality vanishes for orthogonal columns") {
  CHECK(rip::restricted_orthogonality(Matrix::identity(6), 2, 2) ==
        doctest::Approx(0.0).epsilon(1e-12));
}

TEST_CASE("restricted orthogonality of perfectly aligned columns") {
  Matrix phi(1, 2);
  phi.at(0, 0) = 1.0;
  phi.at(0, 1) = 1.0;
  CHECK(rip::restricted_orthogonality(phi, 1, 1) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("theta_11 equals the largest off-diagonal gram entry for unit columns") {
  Matrix phi = random_matrix(29, 4, 8);
  // normalize columns
  for (std::size_t j = 0; j < 8; ++j) {
    double s = 0.0;
    for (std::size_t i = 0; i < 4; ++i) s += phi.at(i, j) * phi.at(i, j);
    s = std::sqrt(s);
    for (std::size_t i = 0; i < 4; ++i) phi.at(i, j) /= s;
  }
  double worst = 0.0;
  for (std::size_t i = 0; i < 8; ++i)
    for (std::size_t j = i + 1; j < 8; ++j) {
      double dot = 0.0;
      for (std::size_t r = 0; r < 4; ++r) dot += phi.at(r, i) * phi.at(r, j);
      worst = std::max(worst, std::fabs(dot));
    }
  CHECK(rip::restricted_orthogonality(phi, 1, 1) == doctest::Approx(worst).epsilon(1e-10));
}

TEST_CASE("parallelogram bound ties theta to the restricted extremes") {
  for (std::uint64_t seed = 1; seed <= 4; ++seed) {
    Matrix phi = random_matrix(seed, 6, 12);
    rip::RipReport rep = rip::extremal_singular_values(phi, 4);
    for (int k = 1; k <= 2; ++k) {
      for (int kp = 1; k + kp <= 4; ++kp) {
        const double theta = rip::restricted_orthogonality(phi, k, kp);
        const double a = rep.a[k + kp - 1], b = rep.b[k + kp - 1];
        CHECK(theta <= 0.5 * (b * b - a * a) + 1e-12);
      }
    }
  }
}

TEST_CASE("complement duality of the restricted extremes") {
  for (std::uint64_t seed = 0; seed < 3; ++seed) {
    const std::size_t m = 10 + 2 * seed, n = 4;
    CodingMatrix cm = gen_gaussian_orthonormal(m, n, seed + 100);
    const Matrix at = linalg::transposed(cm.a);
    const Matrix qt = linalg::transposed(cm.q);
    rip::RipReport rep_a = rip::extremal_singular_values(at, 3);
    rip::RipReport rep_q = rip::extremal_singular_values(qt, 3);
    for (int k = 1; k <= 3; ++k) {
      CHECK(rep_q.a[k - 1] * rep_q.a[k - 1] ==
            doctest::Approx(1.0 - rep_a.b[k - 1] * rep_a.b[k - 1]).epsilon(1e-9));
      CHECK(rep_q.b[k - 1] * rep_q.b[k - 1] ==
            doctest::Approx(1.0 - rep_a.a[k - 1] * rep_a.a[k - 1]).epsilon(1e-9));
    }
  }
}

TEST_CASE("subset budget is enforced and sampling gives inner bounds") {
  Matrix phi = random_matrix(5, 6, 24);
  rip::EnumerationOptions tight;
  tight.budget = 100;
  CHECK_THROWS_AS(rip::extremal_singular_values(phi, 4, 1.0, tight), std::invalid_argument);

  tight.allow_sampling = true;
  tight.sample_count = 400;
  rip::RipReport sampled = rip::extremal_singular_values(phi, 3, 1.0, tight);
  CHECK(sampled.sampled);
  rip::RipReport exact = rip::extremal_singular_values(phi, 3);
  for (int k = 1; k <= 3; ++k) {
    CHECK(sampled.a[k - 1] >= exact.a[k - 1] - 1e-12);
    CHECK(sampled.b[k - 1] <= exact.b[k - 1] + 1e-12);
  }
}

TEST_CASE("recovery bound: the exact vector always passes") {
  // orthonormal columns keep the bound's denominator positive
  Matrix phi = Matrix::identity(6);
  Vec x(6, 0.0);
  x[3] = 1.5;
  CHECK(rip::check_recovery_lemma(phi, x, x, 0.1) == rip::Verdict::Pass);
  CHECK(rip::check_recovery_lemma(phi, x, x, 0.0) == rip::Verdict::Pass);
}

TEST_CASE("recovery bound holds for l1 solutions of planted instances") {
  // parity-check style matrices (orthonormal rows, near-orthonormal columns)
  // keep a_3k - b_2k/sqrt(2) positive; raw gaussian matrices rarely qualify
  int passes = 0, applicable = 0;
  for (std::uint64_t seed = 0; seed < 30; ++seed) {
    Rng rng(mix_seed(0xc3c, seed));
    CodingMatrix cm = gen_gaussian_orthonormal(30, 1, mix_seed(seed, 2));
    Matrix phi = linalg::transposed(cm.q);  // 29 x 30

    Vec x(30, 0.0);
    x[rng.index(30)] = 1.0 + std::fabs(rng.normal());

    Vec noise(phi.rows);
    rng.fill_normal(noise.data(), noise.size(), 0.01);
    Vec b = linalg::matvec(phi, x);
    for (std::size_t i = 0; i < b.size(); ++i) b[i] += noise[i];
    const double eps = 1.05 * std::sqrt(kernels::nrm2sq(noise.data(), noise.size()));

    auto sol = solve_l1_ball(phi, b, eps);
    if (!sol.diagnostics.converged) continue;
    const rip::Verdict v = rip::check_recovery_lemma(phi, x, sol.e_hat, eps);
    CHECK(v != rip::Verdict::Fail);
    if (v != rip::Verdict::NotApplicable) {
      ++applicable;
      if (v == rip::Verdict::Pass) ++passes;
    }
  }
  CHECK(applicable > 0);
  CHECK(passes == applicable);
}

TEST_CASE("support bound lemma: trivial and anchored cases") {
  Matrix phi = random_matrix(11, 5, 12);
  CHECK(rip::check_ds_lemma(phi, Vec(12, 0.0), {0, 5}, 2) == rip::Verdict::Pass);

  Vec h(12, 0.0);
  h[0] = -2.0;
  h[5] = 1.0;
  CHECK(rip::check_ds_lemma(phi, h, {0, 5}, 2) == rip::Verdict::Pass);
}

TEST_CASE("support bound lemma passes on random instances") {
  for (std::uint64_t seed = 0; seed < 25; ++seed) {
    Rng rng(mix_seed(0xd5, seed));
    Matrix phi = random_matrix(mix_seed(seed, 3), 5, 12);
    Vec h(12);
    rng.fill_normal(h.data(), 12);
    CHECK(rip::check_ds_lemma(phi, h, {1, 7}, 2) == rip::Verdict::Pass);
  }
}

TEST_CASE("theorem hypothesis evaluation") {
  rip::RipReport rep;
  rep.k_max = 3;
  rep.a = {1.0, 1.0, 1.0};
  rep.b = {1.0, 1.0, 1.0};
  rep.delta = {0.0, 0.0, 0.0};
  CHECK(rip::check_theorem_hypothesis(rep, 1, 8, 4, rip::HypothesisKind::Socp));
  CHECK(rip::check_theorem_hypothesis(rep, 1, 8, 4, rip::HypothesisKind::Lp));

  rep.delta = {0.3, 0.3, 0.3};
  // socp: 0.3 + 0.15 = 0.45 < 0.5; lp: 0.6 < 1
  CHECK(rip::check_theorem_hypothesis(rep, 1, 8, 4, rip::HypothesisKind::Socp));
  CHECK(rip::check_theorem_hypothesis(rep, 1, 8, 4, rip::HypothesisKind::Lp));
  // at m/n = 1.8 the socp side fails: 0.45 >= 0.4
  CHECK_FALSE(rip::check_theorem_hypothesis(rep, 1, 9, 5, rip::HypothesisKind::Socp));

  CHECK_THROWS_AS(rip::check_theorem_hypothesis(rep, 2, 8, 4, rip::HypothesisKind::Socp),
                  std::invalid_argument);
}

TEST_CASE("theorem hypothesis from an exact report matches hand evaluation") {
  CodingMatrix cm = gen_gaussian_orthonormal(12, 6, 19);
  const Matrix at = linalg::transposed(cm.a);
  const double scale = std::sqrt(12.0 / 6.0);
  rip::RipReport rep = rip::extremal_singular_values(at, 3, scale);
  const double d3 = rep.delta[2], d2 = rep.delta[1];
  const bool socp_hand = d3 + 0.5 * d2 < 0.5 * (2.0 - 1.0);
  const bool lp_hand = d3 + d2 < 1.0;
  CHECK(rip::check_theorem_hypothesis(rep, 1, 12, 6, rip::HypothesisKind::Socp) == socp_hand);
  CHECK(rip::check_theorem_hypothesis(rep, 1, 12, 6, rip::HypothesisKind::Lp) == lp_hand);
}
