#include "ppk/eig.hpp"

#include <algorithm>
#include <cfloat>
#include <cmath>

namespace ppk {

void hessenberg_reduce(DenseMatrix& H, DenseMatrix* Q) {
  const int n = H.rows;
  if (Q) *Q = DenseMatrix::identity(n);
  std::vector<double> v(n), w(n);
  for (int k = 0; k < n - 2; ++k) {
    double alpha = 0.0;
    for (int i = k + 1; i < n; ++i) alpha += H(i, k) * H(i, k);
    alpha = std::sqrt(alpha);
    if (alpha == 0.0) continue;
    if (H(k + 1, k) > 0.0) alpha = -alpha;
    // Householder vector for column k below the subdiagonal
    double vnorm2 = 0.0;
    for (int i = k + 1; i < n; ++i) {
      v[i] = H(i, k);
      if (i == k + 1) v[i] -= alpha;
      vnorm2 += v[i] * v[i];
    }
    if (vnorm2 == 0.0) continue;
    const double beta = 2.0 / vnorm2;
    // H <- P H  (rows k+1..n-1)
    for (int j = 0; j < n; ++j) {
      double s = 0.0;
      for (int i = k + 1; i < n; ++i) s += v[i] * H(i, j);
      s *= beta;
      for (int i = k + 1; i < n; ++i) H(i, j) -= s * v[i];
    }
    // H <- H P  (cols k+1..n-1)
    for (int i = 0; i < n; ++i) {
      double s = 0.0;
      for (int j = k + 1; j < n; ++j) s += H(i, j) * v[j];
      s *= beta;
      for (int j = k + 1; j < n; ++j) H(i, j) -= s * v[j];
    }
    if (Q) {
      for (int i = 0; i < n; ++i) {
        double s = 0.0;
        for (int j = k + 1; j < n; ++j) s += (*Q)(i, j) * v[j];
        s *= beta;
        for (int j = k + 1; j < n; ++j) (*Q)(i, j) -= s * v[j];
      }
    }
    for (int i = k + 2; i < n; ++i) H(i, k) = 0.0;
    H(k + 1, k) = alpha;
  }
}

namespace {

constexpr double kDeflateEps = 64.0 * DBL_EPSILON;

void eig_2x2(double a, double b, double c, double d, Complex& l1, Complex& l2) {
  const double p = 0.5 * (a + d);
  const double det = a * d - b * c;
  const double q = p * p - det;
  if (q >= 0.0) {
    const double r = std::sqrt(q);
    const double big = (p >= 0.0) ? p + r : p - r;
    l1 = Complex(big, 0.0);
    l2 = Complex(big != 0.0 ? det / big : p - r, 0.0);
  } else {
    const double r = std::sqrt(-q);
    l1 = Complex(p, r);
    l2 = Complex(p, -r);
  }
}

// Francis double-shift QR on an upper-Hessenberg matrix; eigenvalues only.
std::vector<Complex> francis_eigenvalues(DenseMatrix H) {
  const int n = H.rows;
  std::vector<Complex> ev;
  ev.reserve(n);
  if (n == 0) return ev;
  if (n == 1) {
    ev.emplace_back(H(0, 0), 0.0);
    return ev;
  }

  double hnorm = 0.0;
  for (int j = 0; j < n; ++j)
    for (int i = 0; i <= std::min(j + 1, n - 1); ++i) hnorm += std::abs(H(i, j));
  if (hnorm == 0.0) hnorm = 1.0;

  int hi = n - 1;
  int iter = 0;
  const int max_iter_per_block = 60;

  while (hi >= 0) {
    // deflate small subdiagonals
    int lo = hi;
    while (lo > 0) {
      double tst = std::abs(H(lo - 1, lo - 1)) + std::abs(H(lo, lo));
      if (tst == 0.0) tst = hnorm;
      if (std::abs(H(lo, lo - 1)) <= kDeflateEps * tst) {
        H(lo, lo - 1) = 0.0;
        break;
      }
      --lo;
    }

    if (lo == hi) {
      ev.emplace_back(H(hi, hi), 0.0);
      --hi;
      iter = 0;
      continue;
    }
    if (lo == hi - 1) {
      Complex l1, l2;
      eig_2x2(H(lo, lo), H(lo, hi), H(hi, lo), H(hi, hi), l1, l2);
      ev.push_back(l1);
      ev.push_back(l2);
      hi -= 2;
      iter = 0;
      continue;
    }

    if (++iter > max_iter_per_block)
      throw ConvergenceError("eig_small_dense: QR iteration failed to converge");

    // shift quantities from the trailing 2x2 (exceptional shift every 10)
    double s, t;
    if (iter % 10 == 0) {
      const double ss = std::abs(H(hi, hi - 1)) + std::abs(H(hi - 1, hi - 2));
      s = 1.5 * ss;
      t = ss * ss;
    } else {
      s = H(hi - 1, hi - 1) + H(hi, hi);
      t = H(hi - 1, hi - 1) * H(hi, hi) - H(hi - 1, hi) * H(hi, hi - 1);
    }

    double x = H(lo, lo) * H(lo, lo) + H(lo, lo + 1) * H(lo + 1, lo) - s * H(lo, lo) + t;
    double y = H(lo + 1, lo) * (H(lo, lo) + H(lo + 1, lo + 1) - s);
    double z = H(lo + 2, lo + 1) * H(lo + 1, lo);

    for (int k = lo; k <= hi - 2; ++k) {
      // Householder on [x y z]^T
      double col[3] = {x, y, z};
      double nrm = std::sqrt(col[0] * col[0] + col[1] * col[1] + col[2] * col[2]);
      if (nrm != 0.0) {
        double alpha = (col[0] >= 0.0) ? -nrm : nrm;
        double v0 = col[0] - alpha, v1 = col[1], v2 = col[2];
        const double vn2 = v0 * v0 + v1 * v1 + v2 * v2;
        if (vn2 != 0.0) {
          const double beta = 2.0 / vn2;
          const int r0 = k, r1 = k + 1, r2 = k + 2;
          const int jstart = std::max(lo, k - 1);
          for (int j = jstart; j <= hi; ++j) {
            double sum = v0 * H(r0, j) + v1 * H(r1, j) + v2 * H(r2, j);
            sum *= beta;
            H(r0, j) -= sum * v0;
            H(r1, j) -= sum * v1;
            H(r2, j) -= sum * v2;
          }
          const int iend = std::min(hi, k + 3);
          for (int i = lo; i <= iend; ++i) {
            double sum = v0 * H(i, r0) + v1 * H(i, r1) + v2 * H(i, r2);
            sum *= beta;
            H(i, r0) -= sum * v0;
            H(i, r1) -= sum * v1;
            H(i, r2) -= sum * v2;
          }
        }
      }
      x = H(k + 1, k);
      y = H(k + 2, k);
      z = (k + 3 <= hi) ? H(k + 3, k) : 0.0;
      if (k > lo) {
        H(k + 1, k - 1) = 0.0;
        if (k + 2 <= hi) H(k + 2, k - 1) = 0.0;
      }
    }
    // final 2-row rotation on [x y]
    {
      const int k = hi - 1;
      const double r = std::hypot(x, y);
      if (r != 0.0) {
        const double c = x / r, sn = y / r;
        for (int j = std::max(lo, k - 1); j <= hi; ++j) {
          const double t1 = c * H(k, j) + sn * H(k + 1, j);
          H(k + 1, j) = -sn * H(k, j) + c * H(k + 1, j);
          H(k, j) = t1;
        }
        for (int i = lo; i <= hi; ++i) {
          const double t1 = c * H(i, k) + sn * H(i, k + 1);
          H(i, k + 1) = -sn * H(i, k) + c * H(i, k + 1);
          H(i, k) = t1;
        }
        if (k > lo) H(k + 1, k - 1) = 0.0;
      }
    }
  }
  return ev;
}

// Sort: ascending real part; conjugate pairs kept adjacent with the
// positive-imaginary member first; deterministic tie-breaks.
std::vector<Complex> sort_eigenvalues(std::vector<Complex> ev) {
  struct Item {
    Complex a, b;
    bool pair;
  };
  std::vector<Item> items;
  std::vector<bool> used(ev.size(), false);
  for (std::size_t i = 0; i < ev.size(); ++i) {
    if (used[i]) continue;
    if (ev[i].imag() == 0.0) {
      items.push_back({ev[i], ev[i], false});
      continue;
    }
    // find the exact conjugate (emitted together by the 2x2 solver)
    for (std::size_t j = i + 1; j < ev.size(); ++j) {
      if (!used[j] && ev[j] == std::conj(ev[i])) {
        used[j] = true;
        Complex plus = ev[i].imag() > 0.0 ? ev[i] : ev[j];
        items.push_back({plus, std::conj(plus), true});
        break;
      }
    }
    used[i] = true;
  }
  std::stable_sort(items.begin(), items.end(), [](const Item& x, const Item& y) {
    if (x.a.real() != y.a.real()) return x.a.real() < y.a.real();
    const double xi = x.pair ? -x.a.imag() : 0.0;
    const double yi = y.pair ? -y.a.imag() : 0.0;
    return xi < yi;
  });
  std::vector<Complex> out;
  out.reserve(ev.size());
  for (const auto& it : items) {
    out.push_back(it.a);
    if (it.pair) out.push_back(it.b);
  }
  return out;
}

// Solve (H - shift I) x = b for complex shift on a real upper-Hessenberg H,
// Gaussian elimination with partial pivoting down the single subdiagonal.
std::vector<Complex> hessenberg_shifted_solve(const DenseMatrix& H, Complex shift,
                                              std::vector<Complex> b, double hnorm) {
  const int n = H.rows;
  std::vector<Complex> U(static_cast<std::size_t>(n) * n, Complex(0, 0));
  auto at = [&](int i, int j) -> Complex& { return U[static_cast<std::size_t>(j) * n + i]; };
  for (int j = 0; j < n; ++j)
    for (int i = 0; i <= std::min(j + 1, n - 1); ++i) at(i, j) = H(i, j);
  for (int i = 0; i < n; ++i) at(i, i) -= shift;

  for (int k = 0; k < n - 1; ++k) {
    if (std::abs(at(k + 1, k)) > std::abs(at(k, k))) {
      for (int j = k; j < n; ++j) std::swap(at(k, j), at(k + 1, j));
      std::swap(b[k], b[k + 1]);
    }
    Complex piv = at(k, k);
    if (std::abs(piv) == 0.0) piv = Complex(DBL_EPSILON * hnorm, 0.0);
    const Complex l = at(k + 1, k) / piv;
    for (int j = k; j < n; ++j) at(k + 1, j) -= l * at(k, j);
    b[k + 1] -= l * b[k];
  }
  for (int i = n - 1; i >= 0; --i) {
    for (int j = i + 1; j < n; ++j) b[i] -= at(i, j) * b[j];
    Complex piv = at(i, i);
    if (std::abs(piv) == 0.0) piv = Complex(DBL_EPSILON * hnorm, 0.0);
    b[i] /= piv;
  }
  return b;
}

}  // namespace

std::vector<Complex> eig_small_dense(DenseMatrix M) {
  if (M.rows != M.cols) throw NumericalError("eig_small_dense: square matrix required");
  if (M.rows > kSmallEigCap) throw NumericalError("eig_small_dense: matrix exceeds small-size cap");
  for (double v : M.a)
    if (!std::isfinite(v)) throw NumericalError("eig_small_dense: non-finite entry");
  hessenberg_reduce(M, nullptr);
  return sort_eigenvalues(francis_eigenvalues(std::move(M)));
}

EigenPairs eig_small_dense_full(DenseMatrix M) {
  if (M.rows != M.cols) throw NumericalError("eig_small_dense_full: square matrix required");
  if (M.rows > kSmallEigCap)
    throw NumericalError("eig_small_dense_full: matrix exceeds small-size cap");
  const int n = M.rows;
  EigenPairs out;
  out.n = n;
  if (n == 0) return out;

  DenseMatrix Q;
  hessenberg_reduce(M, &Q);
  const DenseMatrix H0 = M;  // keep the Hessenberg form for inverse iteration
  out.values = sort_eigenvalues(francis_eigenvalues(M));

  double hnorm = 0.0;
  for (double v : H0.a) hnorm += std::abs(v);
  if (hnorm == 0.0) hnorm = 1.0;

  out.vectors.assign(static_cast<std::size_t>(n) * n, Complex(0, 0));
  for (int j = 0; j < n; ++j) {
    if (j > 0 && out.values[j] == std::conj(out.values[j - 1]) &&
        out.values[j].imag() != 0.0) {
      for (int i = 0; i < n; ++i)
        out.vectors[static_cast<std::size_t>(j) * n + i] =
            std::conj(out.vectors[static_cast<std::size_t>(j - 1) * n + i]);
      continue;
    }
    // inverse iteration; small shift perturbation avoids exact singularity
    const Complex shift =
        out.values[j] + Complex(std::sqrt(DBL_EPSILON) * DBL_EPSILON * hnorm, 0.0);
    std::vector<Complex> w(n, Complex(1.0, 0.0));
    for (int pass = 0; pass < 2; ++pass) {
      w = hessenberg_shifted_solve(H0, shift, std::move(w), hnorm);
      double nw = 0.0;
      for (const auto& c : w) nw += std::norm(c);
      nw = std::sqrt(nw);
      if (nw == 0.0) {
        w.assign(n, Complex(0, 0));
        w[j % n] = 1.0;
        break;
      }
      for (auto& c : w) c /= nw;
    }
    // back to original coordinates: v = Q w
    for (int i = 0; i < n; ++i) {
      Complex s(0, 0);
      for (int k = 0; k < n; ++k) s += Q(i, k) * w[k];
      out.vectors[static_cast<std::size_t>(j) * n + i] = s;
    }
  }
  return out;
}

}  // namespace ppk
