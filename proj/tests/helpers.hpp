#pragma once

// Shared oracles and generators for the test suites.  Everything here is an
// independent re-derivation (dense QR, determinant checks, brute-force
// polynomial fits) so library results are checked against a second route.

#include <algorithm>
#include <cmath>
#include <complex>
#include <vector>

#include "ppk/linalg.hpp"
#include "ppk/operators.hpp"
#include "ppk/rng.hpp"

namespace testutil {

using ppk::Complex;
using ppk::DenseMatrix;

// least squares min ||b - A y|| via Householder QR (independent of the
// library's Givens path)
inline std::vector<double> qr_least_squares(DenseMatrix A, std::vector<double> b,
                                            double* resnorm = nullptr) {
  const int m = A.rows, n = A.cols;
  for (int k = 0; k < n; ++k) {
    double alpha = 0;
    for (int i = k; i < m; ++i) alpha += A(i, k) * A(i, k);
    alpha = std::sqrt(alpha);
    if (A(k, k) > 0) alpha = -alpha;
    if (alpha == 0) continue;
    std::vector<double> v(static_cast<std::size_t>(m - k), 0.0);
    for (int i = k; i < m; ++i) v[static_cast<std::size_t>(i - k)] = A(i, k);
    v[0] -= alpha;
    double vnorm2 = 0;
    for (double x : v) vnorm2 += x * x;
    if (vnorm2 == 0) continue;
    for (int j = k; j < n; ++j) {
      double s = 0;
      for (int i = k; i < m; ++i) s += v[static_cast<std::size_t>(i - k)] * A(i, j);
      s *= 2.0 / vnorm2;
      for (int i = k; i < m; ++i) A(i, j) -= s * v[static_cast<std::size_t>(i - k)];
    }
    double s = 0;
    for (int i = k; i < m; ++i) s += v[static_cast<std::size_t>(i - k)] * b[static_cast<std::size_t>(i)];
    s *= 2.0 / vnorm2;
    for (int i = k; i < m; ++i) b[static_cast<std::size_t>(i)] -= s * v[static_cast<std::size_t>(i - k)];
  }
  std::vector<double> y(static_cast<std::size_t>(n), 0.0);
  for (int i = n - 1; i >= 0; --i) {
    double s = b[static_cast<std::size_t>(i)];
    for (int j = i + 1; j < n; ++j) s -= A(i, j) * y[static_cast<std::size_t>(j)];
    y[static_cast<std::size_t>(i)] = s / A(i, i);
  }
  if (resnorm) {
    double s = 0;
    for (int i = n; i < m; ++i) s += b[static_cast<std::size_t>(i)] * b[static_cast<std::size_t>(i)];
    *resnorm = std::sqrt(s);
  }
  return y;
}

// |det(M - z I)| via complex LU with partial pivoting
inline double char_poly_abs(const DenseMatrix& M, Complex z) {
  const int n = M.rows;
  std::vector<Complex> a(static_cast<std::size_t>(n) * n);
  for (int j = 0; j < n; ++j)
    for (int i = 0; i < n; ++i)
      a[static_cast<std::size_t>(j) * n + i] = Complex(M(i, j), 0) - (i == j ? z : Complex(0, 0));
  double logdet = 0;
  for (int k = 0; k < n; ++k) {
    int piv = k;
    for (int i = k + 1; i < n; ++i)
      if (std::abs(a[static_cast<std::size_t>(k) * n + i]) >
          std::abs(a[static_cast<std::size_t>(k) * n + piv]))
        piv = i;
    if (std::abs(a[static_cast<std::size_t>(k) * n + piv]) == 0) return 0;
    if (piv != k)
      for (int j = k; j < n; ++j)
        std::swap(a[static_cast<std::size_t>(j) * n + k], a[static_cast<std::size_t>(j) * n + piv]);
    Complex d = a[static_cast<std::size_t>(k) * n + k];
    logdet += std::log(std::abs(d));
    for (int i = k + 1; i < n; ++i) {
      Complex l = a[static_cast<std::size_t>(k) * n + i] / d;
      for (int j = k + 1; j < n; ++j)
        a[static_cast<std::size_t>(j) * n + i] -= l * a[static_cast<std::size_t>(j) * n + k];
    }
  }
  return std::exp(logdet);
}

// greedy minimal multiset distance between complex value sets
inline double multiset_distance(std::vector<Complex> a, std::vector<Complex> b) {
  if (a.size() != b.size()) return 1e300;
  double worst = 0;
  for (const Complex& x : a) {
    std::size_t best = 0;
    double bd = 1e300;
    for (std::size_t j = 0; j < b.size(); ++j) {
      double d = std::abs(x - b[j]);
      if (d < bd) {
        bd = d;
        best = j;
      }
    }
    worst = std::max(worst, bd);
    b.erase(b.begin() + static_cast<std::ptrdiff_t>(best));
  }
  return worst;
}

// random dense matrix with standard-normal entries
inline DenseMatrix random_dense(int n, ppk::Rng& rng) {
  DenseMatrix M(n, n);
  for (double& x : M.a) x = rng.normal();
  return M;
}

// wrap a dense matrix as a LinearOperator
class DenseOp final : public ppk::LinearOperator {
 public:
  explicit DenseOp(DenseMatrix m) : LinearOperator(m.rows), m_(std::move(m)) {}

 protected:
  void apply_raw(const double* x, double* y) const override {
    for (int i = 0; i < n(); ++i) y[i] = 0;
    for (int j = 0; j < n(); ++j)
      for (int i = 0; i < n(); ++i) y[i] += m_(i, j) * x[j];
  }

 private:
  DenseMatrix m_;
};

inline ppk::OperatorPtr dense_operator(DenseMatrix m) {
  return std::make_shared<DenseOp>(std::move(m));
}

// conjugate-closed random root set: nreal real roots, npairs conjugate pairs,
// magnitudes in [lo, hi], away from the origin
inline std::vector<Complex> random_roots(int nreal, int npairs, ppk::Rng& rng, double lo = 0.5,
                                         double hi = 10.0) {
  std::vector<Complex> r;
  for (int i = 0; i < nreal; ++i) {
    double mag = lo + (hi - lo) * rng.uniform();
    r.push_back(Complex(rng.uniform() < 0.5 ? -mag : mag, 0));
  }
  for (int i = 0; i < npairs; ++i) {
    double re = (rng.uniform() < 0.5 ? -1 : 1) * (lo + (hi - lo) * rng.uniform());
    double im = lo + (hi - lo) * rng.uniform();
    r.push_back(Complex(re, im));
    r.push_back(Complex(re, -im));
  }
  return r;
}

// scalar pi(z) = prod (1 - z/theta) straight over an expanded root list
inline Complex pi_scalar(const std::vector<Complex>& roots, Complex z) {
  Complex p(1, 0);
  for (Complex t : roots) p *= 1.0 - z / t;
  return p;
}

}  // namespace testutil
