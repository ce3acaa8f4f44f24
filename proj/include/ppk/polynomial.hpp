#pragma once

#include <functional>
#include <limits>
#include <memory>

#include "ppk/counters.hpp"
#include "ppk/operators.hpp"

namespace ppk {

enum class RootTag { Gmres, Balance, Stability };

// One root "unit": either a real root or a conjugate pair (stored once with
// positive imaginary part).  Multiplicities are explicit so the pof of a base
// root stays well defined after stability augmentation.
struct PolyRoot {
  Complex value;
  int multiplicity = 1;
  bool is_pair = false;
  RootTag tag = RootTag::Gmres;
};

// Abstract preconditioner polynomial phi(z) = z p(z) = 1 - pi(z).
class PrecPoly {
 public:
  virtual ~PrecPoly() = default;
  virtual int degree() const = 0;
  virtual Complex phi_eval(Complex z) const = 0;
  virtual Complex phi_deriv(Complex z) const = 0;
  // y = phi(A) v, real arithmetic, exactly degree() matvecs
  virtual void phi_apply(const LinearOperator& op, const double* v, double* y,
                         Counters* c = nullptr) const = 0;
  // y = p(A) v with A p(A) v = phi(A) v
  virtual void p_apply(const LinearOperator& op, const double* v, double* y,
                       Counters* c = nullptr) const = 0;

  Complex pi_eval(Complex z) const { return 1.0 - phi_eval(z); }
  Complex pi_deriv(Complex z) const { return -phi_deriv(z); }

  std::vector<double> phi_apply(const LinearOperator& op, const std::vector<double>& v,
                                Counters* c = nullptr) const {
    std::vector<double> y(op.n());
    phi_apply(op, v.data(), y.data(), c);
    return y;
  }
  std::vector<double> p_apply(const LinearOperator& op, const std::vector<double>& v,
                              Counters* c = nullptr) const {
    std::vector<double> y(op.n());
    p_apply(op, v.data(), y.data(), c);
    return y;
  }
};

using PolyPtr = std::shared_ptr<const PrecPoly>;

// Greedy max-product (Leja) ordering, computed in log magnitude; conjugate
// pairs stay adjacent (positive-imaginary first).  Input must be
// conjugate-closed.
std::vector<Complex> leja_order(const std::vector<Complex>& roots);

// The GMRES-root preconditioner polynomial: pi(z) = prod (1 - z/theta_i),
// phi = 1 - pi.
class RootPoly final : public PrecPoly {
 public:
  RootPoly() = default;
  explicit RootPoly(std::vector<PolyRoot> roots_in_leja_order)
      : roots_(std::move(roots_in_leja_order)) {}

  // group a conjugate-closed value list into units and Leja-order them
  static RootPoly from_roots(const std::vector<Complex>& values, RootTag tag = RootTag::Gmres);

  const std::vector<PolyRoot>& roots() const { return roots_; }
  std::vector<Complex> root_values() const;  // expanded, in application order

  int degree() const override;
  Complex phi_eval(Complex z) const override;
  Complex phi_deriv(Complex z) const override;
  using PrecPoly::phi_apply;
  using PrecPoly::p_apply;
  void phi_apply(const LinearOperator& op, const double* v, double* y,
                 Counters* c) const override;
  void p_apply(const LinearOperator& op, const double* v, double* y, Counters* c) const override;

  // derivative of pi at a real point, needed by the spline test
  double pi_deriv_real(double x) const { return pi_deriv(Complex(x, 0)).real(); }

  RootPoly with_appended(Complex root, RootTag tag) const;      // re-Leja-ordered
  RootPoly with_removed(std::size_t unit_index) const;          // multiplicity decrement

 private:
  std::vector<PolyRoot> roots_;
};

struct PofEntry {
  Complex root;
  int multiplicity = 1;
  bool is_pair = false;
  RootTag tag = RootTag::Gmres;
  double log10_pof = -std::numeric_limits<double>::infinity();
  double residual_norm = -1.0;  // harmonic Ritz eigen-residual; <0 = not computed
  bool spurious = false;
  bool coincident = false;
  int side = 0;  // sign of the real part
};

struct PofReport {
  std::vector<PofEntry> entries;  // one per root unit, same order as roots()
  int larger_side = 0;            // filled by side classification
  double max_log10 = -std::numeric_limits<double>::infinity();
};

// |prod_{i != j} (1 - theta_j/theta_i)| per root, accumulated in log10.  A
// multiplicity-m root keeps m-1 factors at itself, so augmented roots report
// -inf (pof 0).  Exactly coincident distinct units are flagged.
PofReport pof(const RootPoly& poly);

// Algorithm-6-style augmentation: roots passing `filter` with
// log10 pof > cutoff gain ceil((log10 pof - cutoff)/14) copies.
RootPoly add_root_copies(const RootPoly& poly, const PofReport& report, double pofcutoff_log10,
                         const std::function<bool(const PofEntry&)>& filter);

// elementwise phi(lambda_i) over a known spectrum
std::vector<Complex> spectrum_image(const PrecPoly& poly, const std::vector<Complex>& eigenvalues);

// RRGMRES polynomial in Newton form (Balance Method 3):
// phi(z) = z^2 sum_j g_j n_j(z) with the normalized Newton recurrence
//   n_1 = 1/sigma_1,   n_{j+1}(z) = ((z - re_j) n_j(z) + c_j n_{j-1}(z)) / sigma_{j+1},
// mirroring the unit-norm basis columns built during construction, so vector
// and scalar evaluation stay bounded at high degree.
class NewtonPoly final : public PrecPoly {
 public:
  NewtonPoly(std::vector<double> shift_re, std::vector<double> cross,
             std::vector<double> sigma, std::vector<double> coeffs, bool ill_conditioned,
             double gram_condition)
      : re_(std::move(shift_re)),
        im2_(std::move(cross)),
        sigma_(std::move(sigma)),
        g_(std::move(coeffs)),
        ill_conditioned_(ill_conditioned),
        gram_condition_(gram_condition) {}

  int degree() const override { return static_cast<int>(g_.size()) + 1; }
  bool ill_conditioned() const { return ill_conditioned_; }
  double gram_condition() const { return gram_condition_; }
  const std::vector<double>& coeffs() const { return g_; }

  Complex phi_eval(Complex z) const override;
  Complex phi_deriv(Complex z) const override;
  using PrecPoly::phi_apply;
  using PrecPoly::p_apply;
  void phi_apply(const LinearOperator& op, const double* v, double* y,
                 Counters* c) const override;
  void p_apply(const LinearOperator& op, const double* v, double* y, Counters* c) const override;

 private:
  Complex p_eval(Complex z) const;  // p(z) = z sum g_j n_j(z)
  std::vector<double> re_, im2_, sigma_, g_;
  bool ill_conditioned_ = false;
  double gram_condition_ = -1;
};

// Composite polynomial (Balance Method 4): phi(z) = phi_out(phi_in(z)).
class CompositePoly final : public PrecPoly {
 public:
  CompositePoly(PolyPtr inner, PolyPtr outer) : inner_(std::move(inner)), outer_(std::move(outer)) {}

  int degree() const override { return inner_->degree() * outer_->degree(); }
  const PrecPoly& inner() const { return *inner_; }
  const PrecPoly& outer() const { return *outer_; }

  Complex phi_eval(Complex z) const override { return outer_->phi_eval(inner_->phi_eval(z)); }
  Complex phi_deriv(Complex z) const override {
    return outer_->phi_deriv(inner_->phi_eval(z)) * inner_->phi_deriv(z);
  }
  using PrecPoly::phi_apply;
  using PrecPoly::p_apply;
  void phi_apply(const LinearOperator& op, const double* v, double* y,
                 Counters* c) const override;
  void p_apply(const LinearOperator& op, const double* v, double* y, Counters* c) const override;

 private:
  PolyPtr inner_, outer_;
};

// phi(A) as a LinearOperator; its own counter counts phi-applications while
// the base operator's counter keeps accumulating true matvecs.
class PreconditionedOp final : public LinearOperator {
 public:
  PreconditionedOp(OperatorPtr base, PolyPtr poly, Counters* counters = nullptr)
      : LinearOperator(base->n()), base_(std::move(base)), poly_(std::move(poly)),
        counters_(counters) {
    if (base_->known_spectrum()) {
      auto s = *base_->known_spectrum();
      for (auto& z : s) z = poly_->phi_eval(z);
      set_spectrum(std::move(s));
    }
  }

  const LinearOperator& base() const { return *base_; }
  const PrecPoly& poly() const { return *poly_; }

 protected:
  void apply_raw(const double* x, double* y) const override {
    poly_->phi_apply(*base_, x, y, counters_);
  }

 private:
  OperatorPtr base_;
  PolyPtr poly_;
  Counters* counters_;
};

}  // namespace ppk
