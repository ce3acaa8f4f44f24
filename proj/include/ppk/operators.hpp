#pragma once

#include <atomic>
#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "ppk/linalg.hpp"

namespace ppk {

// Abstract matvec provider.  Operators are immutable after construction;
// the matvec counter is atomic so shared operators can be probed from
// concurrent drivers.
class LinearOperator {
 public:
  explicit LinearOperator(int n) : n_(n) {}
  virtual ~LinearOperator() = default;

  int n() const { return n_; }

  void apply(const double* x, double* y) const {
    matvecs_.fetch_add(1, std::memory_order_relaxed);
    apply_raw(x, y);
  }
  std::vector<double> apply(const std::vector<double>& x) const {
    std::vector<double> y(n_);
    apply(x.data(), y.data());
    return y;
  }
  // complex vector through a real operator: two real matvecs
  std::vector<Complex> apply_complex(const std::vector<Complex>& x) const;

  std::int64_t matvec_count() const { return matvecs_.load(std::memory_order_relaxed); }
  void reset_matvec_count() const { matvecs_.store(0, std::memory_order_relaxed); }

  const std::optional<std::vector<Complex>>& known_spectrum() const { return spectrum_; }

  // dense realization, small n only (tests, oracles)
  DenseMatrix to_dense() const;

 protected:
  virtual void apply_raw(const double* x, double* y) const = 0;
  void set_spectrum(std::vector<Complex> s) { spectrum_ = std::move(s); }

 private:
  int n_;
  mutable std::atomic<std::int64_t> matvecs_{0};
  std::optional<std::vector<Complex>> spectrum_;
};

using OperatorPtr = std::shared_ptr<const LinearOperator>;

// Upper-bidiagonal matrix: given diagonal, constant superdiagonal.
OperatorPtr bidiagonal_operator(std::vector<double> diag, double superdiag_value);

OperatorPtr diagonal_operator(std::vector<double> diag);

// Real block-diagonal operator whose spectrum lies on `rays` rays through the
// origin spanning total_angle_deg symmetrically about the positive real axis,
// with radial_points equally spaced eigenvalues per ray.
OperatorPtr ray_spectrum_operator(int n, int rays, double total_angle_deg, int radial_points);

// Hatano-Nelson tridiagonal: superdiagonal e^{gamma}, subdiagonal e^{-gamma},
// given diagonal (e.g. 0.9*4*uniform diagonal entries).
OperatorPtr hatano_nelson_operator(int n, double gamma, std::vector<double> d);

// shifted operator A - sigma I
OperatorPtr shifted_operator(OperatorPtr a, double sigma);

struct SparseMatrix {
  int n = 0;
  int nnz() const { return static_cast<int>(values.size()); }
  std::vector<std::int64_t> row_offsets;  // size n+1, monotone
  std::vector<int> col_indices;           // sorted within each row
  std::vector<double> values;
};

OperatorPtr sparse_operator(SparseMatrix m);

// named generator presets: example1, example2, example3, example4, example7,
// example9, rays:<angle>, hatano (seed used only where randomness is needed)
OperatorPtr make_preset(const std::string& name, std::uint64_t seed);
std::vector<std::string> preset_names();

}  // namespace ppk
