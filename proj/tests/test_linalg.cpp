#include <doctest.h>

#include <cmath>

#include "robustcode/linalg.hpp"
#include "robustcode/rng.hpp"

using namespace robustcode;

namespace {

Matrix random_matrix(Rng& rng, std::size_t r, std::size_t c) {
  Matrix m(r, c);
  rng.fill_normal(m.data.data(), m.data.size());
  return m;
}

}  // namespace

TEST_CASE("householder qr factors and orthogonality") {
  Rng rng(3);
  for (auto [m, n] : std::vector<std::pair<std::size_t, std::size_t>>{{4, 2}, {8, 4}, {12, 12}}) {
    Matrix a = random_matrix(rng, m, n);
    auto qr = linalg::householder_qr(a);

    CHECK(linalg::max_abs_diff_identity(linalg::gram_matrix(qr.q_full)) < 1e-12);
    // reconstruction
    Matrix recon = linalg::matmul(qr.q_full, qr.r);
    double worst = 0.0;
    for (std::size_t i = 0; i < m; ++i)
      for (std::size_t j = 0; j < n; ++j)
        worst = std::max(worst, std::fabs(recon.at(i, j) - a.at(i, j)));
    CHECK(worst < 1e-12);
    // upper triangular with nonnegative diagonal
    for (std::size_t j = 0; j < n; ++j) {
      CHECK(qr.r.at(j, j) >= 0.0);
      for (std::size_t i = j + 1; i < qr.r.rows; ++i) CHECK(qr.r.at(i, j) == 0.0);
    }
  }
}

TEST_CASE("cholesky solves s.p.d. systems") {
  Rng rng(5);
  Matrix b = random_matrix(rng, 10, 6);
  Matrix g = linalg::gram_matrix(b);  // s.p.d. with probability 1
  auto l = linalg::cholesky(g);
  REQUIRE(l.has_value());
  Vec rhs(6);
  rng.fill_normal(rhs.data(), 6);
  Vec x = linalg::cholesky_solve(*l, rhs);
  Vec back = linalg::matvec(g, x);
  for (std::size_t i = 0; i < 6; ++i) CHECK(back[i] == doctest::Approx(rhs[i]).epsilon(1e-10));

  // not positive definite
  Matrix bad = Matrix::identity(3);
  bad.at(2, 2) = -1.0;
  CHECK_FALSE(linalg::cholesky(bad).has_value());
}

TEST_CASE("jacobi eigenvalues of a known matrix") {
  Matrix s(2, 2);
  s.at(0, 0) = 2.0;
  s.at(0, 1) = s.at(1, 0) = 1.0;
  s.at(1, 1) = 2.0;
  Vec eig = linalg::jacobi_eigenvalues(s);
  CHECK(eig[0] == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(eig[1] == doctest::Approx(3.0).epsilon(1e-12));
}

TEST_CASE("one-sided jacobi singular values match the gram-eigenvalue route") {
  Rng rng(9);
  for (auto [r, c] : std::vector<std::pair<std::size_t, std::size_t>>{{5, 3}, {3, 5}, {6, 6}}) {
    Matrix a = random_matrix(rng, r, c);
    Vec sv = linalg::singular_values(a);
    Vec eig = linalg::jacobi_eigenvalues(linalg::gram_matrix(a));  // ascending
    REQUIRE(sv.size() == c);
    // the gram route cannot resolve singular values below sqrt(machine eps)
    const double tol = 1e-8 * sv.front() + 1e-12;
    for (std::size_t i = 0; i < c; ++i) {
      const double expected = std::sqrt(std::max(eig[c - 1 - i], 0.0));
      CHECK(std::fabs(sv[i] - expected) < tol);
    }
  }
}

TEST_CASE("independent rows detects rank") {
  Matrix a(4, 3);
  // rows: e1, e2, e1+e2, e3
  a.at(0, 0) = 1.0;
  a.at(1, 1) = 1.0;
  a.at(2, 0) = 1.0;
  a.at(2, 1) = 1.0;
  a.at(3, 2) = 1.0;
  auto rows = linalg::independent_rows(a);
  CHECK(rows.size() == 3);

  Matrix zero(3, 3);
  CHECK(linalg::independent_rows(zero).empty());
}

TEST_CASE("delete_rows drops the listed rows in order") {
  Matrix a(4, 2);
  for (std::size_t i = 0; i < 4; ++i)
    for (std::size_t j = 0; j < 2; ++j) a.at(i, j) = static_cast<double>(10 * i + j);
  Matrix out = linalg::delete_rows(a, {1, 3});
  REQUIRE(out.rows == 2);
  CHECK(out.at(0, 0) == 0.0);
  CHECK(out.at(1, 0) == 20.0);
}
