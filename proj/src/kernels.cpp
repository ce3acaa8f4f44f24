#include "ppk/kernels.hpp"

#include <cmath>

namespace ppk::kernels {

namespace ref {

double dot(const double* x, const double* y, std::size_t n) {
  double s = 0.0;
  for (std::size_t i = 0; i < n; ++i) s += x[i] * y[i];
  return s;
}

void axpy(double a, const double* x, double* y, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) y[i] += a * x[i];
}

void scal(double a, double* x, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) x[i] *= a;
}

double nrm2(const double* x, std::size_t n) { return std::sqrt(dot(x, x, n)); }

}  // namespace ref

namespace {
Backend pick_default() { return avx2::supported() ? Backend::Avx2 : Backend::Scalar; }
Backend g_backend = pick_default();
}  // namespace

Backend active_backend() { return g_backend; }
Backend best_backend() { return pick_default(); }
void force_backend(Backend b) {
  g_backend = (b == Backend::Avx2 && !avx2::supported()) ? Backend::Scalar : b;
}

double dot(const double* x, const double* y, std::size_t n) {
  return g_backend == Backend::Avx2 ? avx2::dot(x, y, n) : ref::dot(x, y, n);
}

void axpy(double a, const double* x, double* y, std::size_t n) {
  if (g_backend == Backend::Avx2)
    avx2::axpy(a, x, y, n);
  else
    ref::axpy(a, x, y, n);
}

void scal(double a, double* x, std::size_t n) {
  if (g_backend == Backend::Avx2)
    avx2::scal(a, x, n);
  else
    ref::scal(a, x, n);
}

double nrm2(const double* x, std::size_t n) {
  return g_backend == Backend::Avx2 ? avx2::nrm2(x, n) : ref::nrm2(x, n);
}

}  // namespace ppk::kernels
