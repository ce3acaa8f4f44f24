#include "ppk/linalg.hpp"

#include <cmath>

#include "ppk/kernels.hpp"

namespace ppk {

DenseMatrix DenseMatrix::identity(int n) {
  DenseMatrix I(n, n);
  for (int i = 0; i < n; ++i) I(i, i) = 1.0;
  return I;
}

LeastSquaresResult hessenberg_least_squares(const DenseMatrix& H, double beta) {
  const int m = H.cols;
  if (H.rows != m + 1) throw NumericalError("hessenberg_least_squares: H must be (m+1) x m");
  if (m >= 1 && H(0, 0) == 0.0 && H(1, 0) == 0.0)
    throw BreakdownError("hessenberg_least_squares: zero leading column");

  DenseMatrix R(m + 1, m);
  R.a = H.a;
  std::vector<double> g(m + 1, 0.0);
  g[0] = beta;
  std::vector<double> cs(m), sn(m);

  for (int j = 0; j < m; ++j) {
    // previous rotations on the new column
    for (int i = 0; i < j; ++i) {
      const double t = cs[i] * R(i, j) + sn[i] * R(i + 1, j);
      R(i + 1, j) = -sn[i] * R(i, j) + cs[i] * R(i + 1, j);
      R(i, j) = t;
    }
    const double x = R(j, j), y = R(j + 1, j);
    const double r = std::hypot(x, y);
    if (r == 0.0) {
      cs[j] = 1.0;
      sn[j] = 0.0;
    } else {
      cs[j] = x / r;
      sn[j] = y / r;
    }
    R(j, j) = r;
    R(j + 1, j) = 0.0;
    const double t = cs[j] * g[j] + sn[j] * g[j + 1];
    g[j + 1] = -sn[j] * g[j] + cs[j] * g[j + 1];
    g[j] = t;
  }

  LeastSquaresResult out;
  out.resnorm = std::abs(g[m]);
  out.coeffs.assign(m, 0.0);
  for (int i = m - 1; i >= 0; --i) {
    double s = g[i];
    for (int k = i + 1; k < m; ++k) s -= R(i, k) * out.coeffs[k];
    out.coeffs[i] = (R(i, i) != 0.0) ? s / R(i, i) : 0.0;
  }
  return out;
}

namespace {

// Plain partial-pivot LU; factors stored in place, pivots returned.
std::vector<int> lu_factor(DenseMatrix& A) {
  const int n = A.rows;
  std::vector<int> piv(n);
  for (int k = 0; k < n; ++k) {
    int p = k;
    double mx = std::abs(A(k, k));
    for (int i = k + 1; i < n; ++i)
      if (std::abs(A(i, k)) > mx) {
        mx = std::abs(A(i, k));
        p = i;
      }
    if (mx == 0.0) throw SingularMatrixError("lu_factor: singular matrix");
    piv[k] = p;
    if (p != k)
      for (int j = 0; j < n; ++j) std::swap(A(k, j), A(p, j));
    for (int i = k + 1; i < n; ++i) {
      A(i, k) /= A(k, k);
      const double l = A(i, k);
      for (int j = k + 1; j < n; ++j) A(i, j) -= l * A(k, j);
    }
  }
  return piv;
}

void lu_solve(const DenseMatrix& LU, const std::vector<int>& piv, std::vector<double>& b) {
  const int n = LU.rows;
  // rows were fully interchanged during factorization, so permute b up front
  for (int k = 0; k < n; ++k)
    if (piv[k] != k) std::swap(b[k], b[piv[k]]);
  for (int k = 0; k < n; ++k)
    for (int i = k + 1; i < n; ++i) b[i] -= LU(i, k) * b[k];
  for (int i = n - 1; i >= 0; --i) {
    for (int j = i + 1; j < n; ++j) b[i] -= LU(i, j) * b[j];
    b[i] /= LU(i, i);
  }
}

}  // namespace

std::vector<double> solve_dense(DenseMatrix A, std::vector<double> b) {
  if (A.rows != A.cols || static_cast<int>(b.size()) != A.rows)
    throw NumericalError("solve_dense: shape mismatch");
  const auto piv = lu_factor(A);
  lu_solve(A, piv, b);
  return b;
}

std::vector<double> adjoint_solve_last_column(const DenseMatrix& H) {
  const int d = H.rows;
  if (H.cols != d) throw NumericalError("adjoint_solve_last_column: square matrix required");
  DenseMatrix Ht(d, d);
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) Ht(i, j) = H(j, i);
  std::vector<double> e(d, 0.0);
  e[d - 1] = 1.0;
  return solve_dense(std::move(Ht), std::move(e));
}

std::vector<double> matvec(const DenseMatrix& A, const std::vector<double>& x) {
  std::vector<double> y(A.rows, 0.0);
  for (int j = 0; j < A.cols; ++j) kernels::axpy(x[j], A.col(j), y.data(), A.rows);
  return y;
}

std::vector<double> matvec_t(const DenseMatrix& A, const std::vector<double>& x) {
  std::vector<double> y(A.cols, 0.0);
  for (int j = 0; j < A.cols; ++j) y[j] = kernels::dot(A.col(j), x.data(), A.rows);
  return y;
}

}  // namespace ppk
