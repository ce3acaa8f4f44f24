#include "ppk/operators.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "ppk/rng.hpp"

namespace ppk {

std::vector<Complex> LinearOperator::apply_complex(const std::vector<Complex>& x) const {
  std::vector<double> re(n_), im(n_), yre(n_), yim(n_);
  for (int i = 0; i < n_; ++i) {
    re[i] = x[i].real();
    im[i] = x[i].imag();
  }
  apply(re.data(), yre.data());
  apply(im.data(), yim.data());
  std::vector<Complex> y(n_);
  for (int i = 0; i < n_; ++i) y[i] = Complex(yre[i], yim[i]);
  return y;
}

DenseMatrix LinearOperator::to_dense() const {
  DenseMatrix A(n_, n_);
  std::vector<double> e(n_, 0.0);
  for (int j = 0; j < n_; ++j) {
    e[j] = 1.0;
    apply(e.data(), A.col(j));
    e[j] = 0.0;
  }
  return A;
}

namespace {

class BidiagonalOp final : public LinearOperator {
 public:
  BidiagonalOp(std::vector<double> diag, double super)
      : LinearOperator(static_cast<int>(diag.size())), d_(std::move(diag)), super_(super) {
    std::vector<Complex> s(d_.size());
    for (std::size_t i = 0; i < d_.size(); ++i) s[i] = Complex(d_[i], 0.0);
    set_spectrum(std::move(s));
  }

 protected:
  void apply_raw(const double* x, double* y) const override {
    const int m = n();
    for (int i = 0; i < m - 1; ++i) y[i] = d_[i] * x[i] + super_ * x[i + 1];
    y[m - 1] = d_[m - 1] * x[m - 1];
  }

 private:
  std::vector<double> d_;
  double super_;
};

class DiagonalOp final : public LinearOperator {
 public:
  explicit DiagonalOp(std::vector<double> diag)
      : LinearOperator(static_cast<int>(diag.size())), d_(std::move(diag)) {
    std::vector<Complex> s(d_.size());
    for (std::size_t i = 0; i < d_.size(); ++i) s[i] = Complex(d_[i], 0.0);
    set_spectrum(std::move(s));
  }

 protected:
  void apply_raw(const double* x, double* y) const override {
    for (int i = 0; i < n(); ++i) y[i] = d_[i] * x[i];
  }

 private:
  std::vector<double> d_;
};

// block diagonal with 1x1 blocks (real eigenvalues) and 2x2 rotation-scaling
// blocks [[alpha, beta], [-beta, alpha]] for conjugate pairs
class BlockDiagOp final : public LinearOperator {
 public:
  BlockDiagOp(int n, std::vector<double> single, std::vector<Complex> pairs)
      : LinearOperator(n), single_(std::move(single)), pairs_(std::move(pairs)) {
    std::vector<Complex> s;
    s.reserve(n);
    for (double v : single_) s.emplace_back(v, 0.0);
    for (const auto& p : pairs_) {
      s.push_back(p);
      s.push_back(std::conj(p));
    }
    // pad with zeros only if the caller under-filled; construction checks size
    set_spectrum(std::move(s));
  }

 protected:
  void apply_raw(const double* x, double* y) const override {
    int k = 0;
    for (double v : single_) {
      y[k] = v * x[k];
      ++k;
    }
    for (const auto& p : pairs_) {
      const double a = p.real(), b = p.imag();
      y[k] = a * x[k] + b * x[k + 1];
      y[k + 1] = -b * x[k] + a * x[k + 1];
      k += 2;
    }
  }

 private:
  std::vector<double> single_;
  std::vector<Complex> pairs_;
};

class TridiagOp final : public LinearOperator {
 public:
  TridiagOp(std::vector<double> diag, double super, double sub)
      : LinearOperator(static_cast<int>(diag.size())),
        d_(std::move(diag)),
        super_(super),
        sub_(sub) {}

 protected:
  void apply_raw(const double* x, double* y) const override {
    const int m = n();
    for (int i = 0; i < m; ++i) {
      double s = d_[i] * x[i];
      if (i > 0) s += sub_ * x[i - 1];
      if (i + 1 < m) s += super_ * x[i + 1];
      y[i] = s;
    }
  }

 private:
  std::vector<double> d_;
  double super_, sub_;
};

class ShiftedOp final : public LinearOperator {
 public:
  ShiftedOp(OperatorPtr a, double sigma) : LinearOperator(a->n()), a_(std::move(a)), sigma_(sigma) {
    if (a_->known_spectrum()) {
      auto s = *a_->known_spectrum();
      for (auto& v : s) v -= sigma_;
      set_spectrum(std::move(s));
    }
  }

 protected:
  void apply_raw(const double* x, double* y) const override {
    a_->apply(x, y);
    for (int i = 0; i < n(); ++i) y[i] -= sigma_ * x[i];
  }

 private:
  OperatorPtr a_;
  double sigma_;
};

class CsrOp final : public LinearOperator {
 public:
  explicit CsrOp(SparseMatrix m) : LinearOperator(m.n), m_(std::move(m)) {}
  const SparseMatrix& matrix() const { return m_; }

 protected:
  void apply_raw(const double* x, double* y) const override {
    for (int i = 0; i < n(); ++i) {
      double s = 0.0;
      for (std::int64_t k = m_.row_offsets[i]; k < m_.row_offsets[i + 1]; ++k)
        s += m_.values[k] * x[m_.col_indices[k]];
      y[i] = s;
    }
  }

 private:
  SparseMatrix m_;
};

std::vector<double> range_step(double lo, double hi, double step) {
  std::vector<double> v;
  const int count = static_cast<int>(std::floor((hi - lo) / step + 0.5)) + 1;
  v.reserve(count);
  for (int i = 0; i < count; ++i) v.push_back(lo + i * step);
  return v;
}

void append_range(std::vector<double>& v, double lo, double hi, double step = 1.0) {
  auto r = range_step(lo, hi, step);
  v.insert(v.end(), r.begin(), r.end());
}

}  // namespace

OperatorPtr bidiagonal_operator(std::vector<double> diag, double superdiag_value) {
  if (diag.empty()) throw std::invalid_argument("bidiagonal_operator: empty diagonal");
  return std::make_shared<BidiagonalOp>(std::move(diag), superdiag_value);
}

OperatorPtr diagonal_operator(std::vector<double> diag) {
  if (diag.empty()) throw std::invalid_argument("diagonal_operator: empty diagonal");
  return std::make_shared<DiagonalOp>(std::move(diag));
}

OperatorPtr ray_spectrum_operator(int n, int rays, double total_angle_deg, int radial_points) {
  if (rays < 1 || radial_points < 1) throw std::invalid_argument("ray_spectrum_operator: bad counts");
  if (rays * radial_points > n)
    throw std::invalid_argument("ray_spectrum_operator: rays*points exceed dimension");
  const double pi = 3.14159265358979323846;
  // one spectral "unit" per point: real points cost 1 dimension, complex
  // points (taken with their implicit conjugate via a 2x2 block) cost 2
  struct Unit {
    bool real;
    double val_re, val_im;
  };
  std::vector<Unit> units;
  for (int k = 0; k < rays; ++k) {
    double ang = 0.0;
    if (rays > 1) ang = total_angle_deg * (static_cast<double>(k) / (rays - 1) - 0.5);
    const double th = ang * pi / 180.0;
    const bool real_ray = std::abs(std::sin(th)) < 1e-12;
    if (!real_ray && th < 0.0) continue;  // covered as the conjugate of the +ang ray
    for (int j = 1; j <= radial_points; ++j) {
      const double r = static_cast<double>(j);
      units.push_back({real_ray, r * std::cos(th), real_ray ? 0.0 : r * std::sin(th)});
    }
  }
  // tile the unit list until the requested dimension is filled; duplication
  // keeps the spectrum (as a set) exactly on the rays
  std::vector<double> single;
  std::vector<Complex> pairs;
  int used = 0;
  std::size_t u = 0;
  while (used < n) {
    const Unit& it = units[u % units.size()];
    ++u;
    if (it.real) {
      single.push_back(it.val_re);
      used += 1;
    } else {
      if (used + 2 > n) {
        single.push_back(it.val_re);  // last odd slot: keep it real
        used += 1;
      } else {
        pairs.push_back(Complex(it.val_re, it.val_im));
        used += 2;
      }
    }
  }
  return std::make_shared<BlockDiagOp>(n, std::move(single), std::move(pairs));
}

OperatorPtr hatano_nelson_operator(int n, double gamma, std::vector<double> d) {
  if (n < 2) throw std::invalid_argument("hatano_nelson_operator: n >= 2 required");
  if (d.empty()) d.assign(n, 0.0);
  if (static_cast<int>(d.size()) != n)
    throw std::invalid_argument("hatano_nelson_operator: diagonal size mismatch");
  return std::make_shared<TridiagOp>(std::move(d), std::exp(gamma), std::exp(-gamma));
}

OperatorPtr shifted_operator(OperatorPtr a, double sigma) {
  return std::make_shared<ShiftedOp>(std::move(a), sigma);
}

OperatorPtr sparse_operator(SparseMatrix m) { return std::make_shared<CsrOp>(std::move(m)); }

OperatorPtr make_preset(const std::string& name, std::uint64_t seed) {
  std::vector<double> d;
  if (name == "example1") {
    append_range(d, -2500, -1);
    append_range(d, 1, 2500);
    return bidiagonal_operator(std::move(d), 1.0);
  }
  if (name == "example2") {
    append_range(d, -100, -1);
    append_range(d, 1, 4900);
    return bidiagonal_operator(std::move(d), 1.0);
  }
  if (name == "example3") {
    append_range(d, -100, -1);
    append_range(d, 1, 9850);
    append_range(d, 9860, 10350, 10.0);
    return bidiagonal_operator(std::move(d), 1.0);
  }
  if (name == "example4") {
    append_range(d, -1000, -100);
    append_range(d, 0.1, 0.9, 0.1);
    append_range(d, 1, 4090);
    return diagonal_operator(std::move(d));
  }
  if (name == "example7") {
    // small cluster canonicalized as 0.001, 0.01..0.09, 0.1..0.9
    d = {-500, -400, -300, -200, -100, 0.001};
    append_range(d, 0.01, 0.09, 0.01);
    append_range(d, 0.1, 0.9, 0.1);
    append_range(d, 1, 4971);
    append_range(d, 5000, 5400, 100.0);
    return bidiagonal_operator(std::move(d), 0.1);
  }
  if (name == "example9") {
    append_range(d, 1, 500);
    append_range(d, 500.2, 520, 0.2);
    append_range(d, 521, 4920);
    return diagonal_operator(std::move(d));
  }
  if (name.rfind("rays:", 0) == 0) {
    const double angle = std::stod(name.substr(5));
    return ray_spectrum_operator(2000, 50, angle, 20);
  }
  if (name == "hatano") {
    Rng rng(seed, /*stream=*/17);
    std::vector<double> diag(2500);
    for (auto& x : diag) x = 0.9 * 4.0 * rng.uniform();
    return hatano_nelson_operator(2500, 0.5, std::move(diag));
  }
  throw std::invalid_argument("unknown matrix preset: " + name);
}

std::vector<std::string> preset_names() {
  return {"example1", "example2", "example3", "example4",
          "example7", "example9", "rays:<angle>", "hatano"};
}

}  // namespace ppk
