#pragma once

#include <cstddef>

// Length-n vector kernels used by every solver inner loop.  A scalar
// reference path is always available; an AVX2 path is selected at runtime
// when the CPU supports it.  The two paths are equivalence-tested.

namespace ppk::kernels {

enum class Backend { Scalar, Avx2 };

Backend active_backend();
Backend best_backend();
void force_backend(Backend b);  // test hook; also used by --no-simd

double dot(const double* x, const double* y, std::size_t n);
void axpy(double a, const double* x, double* y, std::size_t n);  // y += a*x
void scal(double a, double* x, std::size_t n);
double nrm2(const double* x, std::size_t n);

namespace ref {
double dot(const double* x, const double* y, std::size_t n);
void axpy(double a, const double* x, double* y, std::size_t n);
void scal(double a, double* x, std::size_t n);
double nrm2(const double* x, std::size_t n);
}  // namespace ref

namespace avx2 {
bool supported();
double dot(const double* x, const double* y, std::size_t n);
void axpy(double a, const double* x, double* y, std::size_t n);
void scal(double a, double* x, std::size_t n);
double nrm2(const double* x, std::size_t n);
}  // namespace avx2

}  // namespace ppk::kernels
