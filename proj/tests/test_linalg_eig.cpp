#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <algorithm>
#include <cmath>
#include <complex>
#include <vector>

#include "doctest.h"
#include "helpers.hpp"
#include "ppk/eig.hpp"
#include "ppk/linalg.hpp"
#include "ppk/rng.hpp"

using namespace ppk;
using testutil::char_poly_abs;
using testutil::multiset_distance;
using testutil::qr_least_squares;

TEST_CASE("hessenberg least squares: 1x1 exact and orthogonal column") {
  {
    DenseMatrix H(2, 1);
    H(0, 0) = 2;
    H(1, 0) = 0;
    auto r = hessenberg_least_squares(H, 1.0);
    CHECK(r.coeffs[0] == doctest::Approx(0.5));
    CHECK(r.resnorm == doctest::Approx(0.0));
  }
  {
    DenseMatrix H(2, 1);
    H(0, 0) = 0;
    H(1, 0) = 1;
    auto r = hessenberg_least_squares(H, 1.0);
    CHECK(r.coeffs[0] == doctest::Approx(0.0));
    CHECK(r.resnorm == doctest::Approx(1.0));
  }
}

TEST_CASE("hessenberg least squares matches a Householder QR oracle") {
  Rng rng(7, 0);
  for (int trial = 0; trial < 20; ++trial) {
    const int m = 4;
    DenseMatrix H(m + 1, m);
    for (int j = 0; j < m; ++j)
      for (int i = 0; i <= j + 1; ++i) H(i, j) = rng.normal();
    for (int j = 0; j < m; ++j) H(j + 1, j) += 3.0;  // keep it well conditioned
    double beta = 0.5 + rng.uniform();

    auto r = hessenberg_least_squares(H, beta);
    std::vector<double> rhs(static_cast<std::size_t>(m + 1), 0.0);
    rhs[0] = beta;
    double oracle_res = 0;
    auto y = qr_least_squares(H, rhs, &oracle_res);
    for (int i = 0; i < m; ++i)
      CHECK(r.coeffs[static_cast<std::size_t>(i)] ==
            doctest::Approx(y[static_cast<std::size_t>(i)]).epsilon(1e-12));
    CHECK(r.resnorm == doctest::Approx(oracle_res).epsilon(1e-10));
  }
}

TEST_CASE("hessenberg least squares residual is non-increasing in the column count") {
  Rng rng(8, 0);
  const int m = 8;
  DenseMatrix H(m + 1, m);
  for (int j = 0; j < m; ++j)
    for (int i = 0; i <= j + 1; ++i) H(i, j) = rng.normal();
  double prev = 1e300;
  for (int k = 1; k <= m; ++k) {
    DenseMatrix Hk(k + 1, k);
    for (int j = 0; j < k; ++j)
      for (int i = 0; i <= k; ++i) Hk(i, j) = H(i, j);
    auto r = hessenberg_least_squares(Hk, 1.0);
    CHECK(r.resnorm <= prev + 1e-12);
    prev = r.resnorm;
  }
}

TEST_CASE("adjoint_solve_last_column examples and residual check") {
  {
    auto f = adjoint_solve_last_column(DenseMatrix::identity(3));
    CHECK(f[0] == doctest::Approx(0.0));
    CHECK(f[1] == doctest::Approx(0.0));
    CHECK(f[2] == doctest::Approx(1.0));
  }
  {
    DenseMatrix H(2, 2);
    H(0, 0) = 2;
    H(1, 1) = 4;
    auto f = adjoint_solve_last_column(H);
    CHECK(f[0] == doctest::Approx(0.0));
    CHECK(f[1] == doctest::Approx(0.25));
  }
  Rng rng(9, 0);
  DenseMatrix H = testutil::random_dense(6, rng);
  for (int i = 0; i < 6; ++i) H(i, i) += 5.0;
  auto f = adjoint_solve_last_column(H);
  // H^T f = e_6
  double fn = 0;
  for (double v : f) fn += v * v;
  fn = std::sqrt(fn);
  for (int i = 0; i < 6; ++i) {
    double s = 0;
    for (int k = 0; k < 6; ++k) s += H(k, i) * f[static_cast<std::size_t>(k)];
    CHECK(std::abs(s - (i == 5 ? 1.0 : 0.0)) <= 1e-12 * (1.0 + fn));
  }
}

TEST_CASE("solve_dense inverts against matvec") {
  Rng rng(10, 0);
  DenseMatrix A = testutil::random_dense(8, rng);
  for (int i = 0; i < 8; ++i) A(i, i) += 6.0;
  auto b = rng.normal_vector(8);
  auto x = solve_dense(A, b);
  auto ax = matvec(A, x);
  for (int i = 0; i < 8; ++i) CHECK(ax[static_cast<std::size_t>(i)] ==
                                    doctest::Approx(b[static_cast<std::size_t>(i)]).epsilon(1e-10));
  DenseMatrix S(2, 2);  // exactly singular
  S(0, 0) = 1;
  S(0, 1) = 2;
  S(1, 0) = 2;
  S(1, 1) = 4;
  CHECK_THROWS_AS((void)solve_dense(S, {1.0, 1.0}), SingularMatrixError);
}

TEST_CASE("eig_small_dense: diagonal and rotation matrices") {
  DenseMatrix D(3, 3);
  D(0, 0) = 1;
  D(1, 1) = 2;
  D(2, 2) = 3;
  auto ev = eig_small_dense(D);
  CHECK(multiset_distance(ev, {Complex(1, 0), Complex(2, 0), Complex(3, 0)}) < 1e-12);

  DenseMatrix R(2, 2);
  R(0, 1) = -1;
  R(1, 0) = 1;
  ev = eig_small_dense(R);
  CHECK(multiset_distance(ev, {Complex(0, 1), Complex(0, -1)}) < 1e-12);
  // exact conjugate pairing, positive-imaginary first
  CHECK(ev[0].imag() > 0);
  CHECK(ev[1] == std::conj(ev[0]));
}

TEST_CASE("eig_small_dense eigenvalues kill the characteristic polynomial") {
  Rng rng(12, 0);
  for (int trial = 0; trial < 10; ++trial) {
    DenseMatrix M = testutil::random_dense(5, rng);
    auto ev = eig_small_dense(M);
    REQUIRE(ev.size() == 5);
    // scale reference: char poly at a generic point
    double ref = char_poly_abs(M, Complex(7.5, 3.5));
    for (Complex z : ev) CHECK(char_poly_abs(M, z) <= 1e-8 * ref);
    // ordering contract: ascending real part, pairs adjacent
    for (std::size_t i = 0; i + 1 < ev.size(); ++i) CHECK(ev[i].real() <= ev[i + 1].real() + 1e-12);
    for (std::size_t i = 0; i < ev.size(); ++i)
      if (ev[i].imag() > 0) {
        REQUIRE(i + 1 < ev.size());
        CHECK(ev[i + 1] == std::conj(ev[i]));
        ++i;
      }
  }
}

TEST_CASE("companion matrices recover known roots") {
  Rng rng(13, 0);
  for (int trial = 0; trial < 10; ++trial) {
    int k = 3 + static_cast<int>(rng.uniform() * 6);  // 3..8
    auto roots = testutil::random_roots(k % 2 ? k : k - 2, k % 2 ? 0 : 1, rng, 0.5, 3.0);
    k = static_cast<int>(roots.size());
    // monic coefficients from the roots
    std::vector<Complex> coef{1.0};
    for (Complex r : roots) {
      std::vector<Complex> next(coef.size() + 1, 0.0);
      for (std::size_t i = 0; i < coef.size(); ++i) {
        next[i] += coef[i];
        next[i + 1] -= coef[i] * r;
      }
      coef = std::move(next);
    }
    DenseMatrix C(k, k);
    for (int i = 1; i < k; ++i) C(i, i - 1) = 1.0;
    for (int i = 0; i < k; ++i) C(i, k - 1) = -coef[static_cast<std::size_t>(k - i)].real();
    auto ev = eig_small_dense(C);
    CHECK(multiset_distance(ev, roots) <= 1e-8);
  }
}

TEST_CASE("eig_small_dense_full returns matched eigenvectors") {
  Rng rng(14, 0);
  DenseMatrix M = testutil::random_dense(6, rng);
  auto ep = eig_small_dense_full(M);
  REQUIRE(ep.values.size() == 6);
  for (int j = 0; j < 6; ++j) {
    double num = 0, den = 0;
    for (int i = 0; i < 6; ++i) {
      Complex mv(0, 0);
      for (int k = 0; k < 6; ++k) mv += M(i, k) * ep.vec(k, j);
      num += std::norm(mv - ep.values[static_cast<std::size_t>(j)] * ep.vec(i, j));
      den += std::norm(ep.vec(i, j));
    }
    CHECK(std::sqrt(num / den) <= 1e-8);
  }
}
