#pragma once

#include <complex>
#include <stdexcept>
#include <vector>

namespace ppk {

using Complex = std::complex<double>;

struct NumericalError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct BreakdownError : NumericalError {
  using NumericalError::NumericalError;
};
struct SingularMatrixError : NumericalError {
  using NumericalError::NumericalError;
};
struct ConvergenceError : NumericalError {
  using NumericalError::NumericalError;
};

// Column-major dense matrix.
struct DenseMatrix {
  int rows = 0, cols = 0;
  std::vector<double> a;

  DenseMatrix() = default;
  DenseMatrix(int r, int c) : rows(r), cols(c), a(static_cast<std::size_t>(r) * c, 0.0) {}

  double& operator()(int i, int j) { return a[static_cast<std::size_t>(j) * rows + i]; }
  double operator()(int i, int j) const { return a[static_cast<std::size_t>(j) * rows + i]; }

  double* col(int j) { return a.data() + static_cast<std::size_t>(j) * rows; }
  const double* col(int j) const { return a.data() + static_cast<std::size_t>(j) * rows; }

  static DenseMatrix identity(int n);
};

struct LeastSquaresResult {
  std::vector<double> coeffs;
  double resnorm = 0.0;
};

// Minimize ||beta*e1 - H y|| for (m+1) x m upper-Hessenberg H via plane
// rotations; resnorm is the GMRES "shortcut" residual norm.
LeastSquaresResult hessenberg_least_squares(const DenseMatrix& H, double beta);

// f = H^{-T} e_d for real square H (adjoint solve against the last
// elementary vector).  Throws SingularMatrixError.
std::vector<double> adjoint_solve_last_column(const DenseMatrix& H);

// General dense solve A x = b (partial-pivot LU).  A, b by value.
std::vector<double> solve_dense(DenseMatrix A, std::vector<double> b);

// y = A x  /  y = A^T x for dense A.
std::vector<double> matvec(const DenseMatrix& A, const std::vector<double>& x);
std::vector<double> matvec_t(const DenseMatrix& A, const std::vector<double>& x);

}  // namespace ppk
