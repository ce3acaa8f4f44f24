#pragma once

#include "ppk/linalg.hpp"

namespace ppk {

inline constexpr int kSmallEigCap = 512;

// Householder reduction to upper-Hessenberg form.  On return H is the reduced
// matrix; if Q is non-null it receives the orthogonal factor (A = Q H Q^T).
void hessenberg_reduce(DenseMatrix& H, DenseMatrix* Q);

// Eigenvalues of a real general k x k matrix (k <= kSmallEigCap) by
// Hessenberg reduction followed by Francis double-shift QR.  Real
// arithmetic throughout; conjugate pairs are exact and adjacent
// (positive-imaginary member first); sorted ascending by real part.
std::vector<Complex> eig_small_dense(DenseMatrix M);

struct EigenPairs {
  std::vector<Complex> values;
  // column-major k x k complex eigenvector matrix, columns matched to values;
  // for a conjugate pair the second column is the conjugate of the first.
  std::vector<Complex> vectors;
  int n = 0;
  Complex vec(int i, int j) const { return vectors[static_cast<std::size_t>(j) * n + i]; }
};

// Eigenvalues plus eigenvectors (inverse iteration on the Hessenberg form).
EigenPairs eig_small_dense_full(DenseMatrix M);

}  // namespace ppk
