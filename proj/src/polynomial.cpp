#include "ppk/polynomial.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "ppk/kernels.hpp"
#include "ppk/linalg.hpp"

namespace ppk {

namespace {

constexpr double kLogFloor = -745.0;  // ~log(DBL_MIN), stand-in for log(0)

double safe_log_abs(Complex z) {
  double a = std::abs(z);
  return a > 0 ? std::log(a) : kLogFloor;
}

// summed log-distance from candidate value z to every copy of `unit`
double log_dist_to_unit(Complex z, const PolyRoot& unit) {
  double d = safe_log_abs(z - unit.value);
  if (unit.is_pair) d += safe_log_abs(z - std::conj(unit.value));
  return d * unit.multiplicity;
}

std::vector<PolyRoot> leja_order_units(std::vector<PolyRoot> units) {
  const std::size_t n = units.size();
  if (n <= 1) return units;
  std::vector<PolyRoot> out;
  out.reserve(n);
  std::vector<bool> used(n, false);

  std::size_t first = 0;
  for (std::size_t i = 1; i < n; ++i)
    if (std::abs(units[i].value) > std::abs(units[first].value)) first = i;
  used[first] = true;
  out.push_back(units[first]);

  // running log-product distance from each unused unit to the chosen set
  std::vector<double> score(n, 0.0);
  for (std::size_t i = 0; i < n; ++i)
    if (!used[i]) score[i] = log_dist_to_unit(units[i].value, units[first]);

  for (std::size_t picked = 1; picked < n; ++picked) {
    std::size_t best = n;
    for (std::size_t i = 0; i < n; ++i) {
      if (used[i]) continue;
      if (best == n || score[i] > score[best]) best = i;
    }
    used[best] = true;
    out.push_back(units[best]);
    for (std::size_t i = 0; i < n; ++i)
      if (!used[i]) score[i] += log_dist_to_unit(units[i].value, units[best]);
  }
  return out;
}

void check_nonzero_root(Complex z) {
  if (std::abs(z) < 1e-300)
    throw NumericalError("polynomial root at (or numerically at) the origin");
}

void bump(Counters* c, std::int64_t vecops, std::int64_t dots = 0) {
  if (c) {
    c->vecops += vecops;
    c->dots += dots;
  }
}

}  // namespace

std::vector<Complex> leja_order(const std::vector<Complex>& roots) {
  auto poly = RootPoly::from_roots(roots);
  return poly.root_values();
}

RootPoly RootPoly::from_roots(const std::vector<Complex>& values, RootTag tag) {
  std::vector<PolyRoot> units;
  units.reserve(values.size());
  for (Complex z : values) {
    check_nonzero_root(z);
    double im_tol = 1e-14 * std::abs(z);
    if (std::abs(z.imag()) <= im_tol) {
      units.push_back({Complex(z.real(), 0.0), 1, false, tag});
    } else if (z.imag() > 0) {
      units.push_back({z, 1, true, tag});
    }
    // negative-imaginary members are the implicit halves of their pairs
  }
  // sanity: conjugate closure means pair count accounts for every complex value
  int expanded = 0;
  for (const auto& u : units) expanded += u.is_pair ? 2 : 1;
  if (expanded != static_cast<int>(values.size()))
    throw NumericalError("root list is not conjugate-closed");
  return RootPoly(leja_order_units(std::move(units)));
}

std::vector<Complex> RootPoly::root_values() const {
  std::vector<Complex> out;
  for (const auto& u : roots_)
    for (int m = 0; m < u.multiplicity; ++m) {
      out.push_back(u.value);
      if (u.is_pair) out.push_back(std::conj(u.value));
    }
  return out;
}

int RootPoly::degree() const {
  int d = 0;
  for (const auto& u : roots_) d += u.multiplicity * (u.is_pair ? 2 : 1);
  return d;
}

Complex RootPoly::phi_eval(Complex z) const {
  Complex pi(1.0, 0.0);
  for (const auto& u : roots_)
    for (int m = 0; m < u.multiplicity; ++m) {
      pi *= 1.0 - z / u.value;
      if (u.is_pair) pi *= 1.0 - z / std::conj(u.value);
    }
  return 1.0 - pi;
}

Complex RootPoly::phi_deriv(Complex z) const {
  Complex val(1.0, 0.0), der(0.0, 0.0);
  auto step = [&](Complex theta) {
    Complex f = 1.0 - z / theta;
    Complex fp = -1.0 / theta;
    der = der * f + val * fp;
    val *= f;
  };
  for (const auto& u : roots_)
    for (int m = 0; m < u.multiplicity; ++m) {
      step(u.value);
      if (u.is_pair) step(std::conj(u.value));
    }
  return -der;
}

void RootPoly::phi_apply(const LinearOperator& op, const double* v, double* y,
                         Counters* c) const {
  const std::size_t n = op.n();
  std::vector<double> w(v, v + n), t(n), s(n);
  for (const auto& u : roots_) {
    check_nonzero_root(u.value);
    for (int m = 0; m < u.multiplicity; ++m) {
      op.apply(w.data(), t.data());
      if (!u.is_pair) {
        kernels::axpy(-1.0 / u.value.real(), t.data(), w.data(), n);
        bump(c, 1);
      } else {
        double a2 = std::norm(u.value);
        double c1 = 2.0 * u.value.real() / a2;
        double c2 = 1.0 / a2;
        op.apply(t.data(), s.data());
        kernels::axpy(-c1, t.data(), w.data(), n);
        kernels::axpy(c2, s.data(), w.data(), n);
        bump(c, 2);
      }
    }
  }
  for (std::size_t i = 0; i < n; ++i) y[i] = v[i] - w[i];
  bump(c, 1);
}

void RootPoly::p_apply(const LinearOperator& op, const double* v, double* y,
                       Counters* c) const {
  // telescoping identity: P_{k-1} - P_k = (1/theta_k) A P_{k-1}, so
  // p(A)v = sum_k (1/theta_k) P_{k-1}(A) v with conjugate pairs combined into
  // a real rank-two update.
  const std::size_t n = op.n();
  std::vector<double> w(v, v + n), t(n), s(n);
  std::fill(y, y + n, 0.0);
  const int total = degree();
  int applied = 0;
  for (const auto& u : roots_) {
    check_nonzero_root(u.value);
    for (int m = 0; m < u.multiplicity; ++m) {
      if (!u.is_pair) {
        kernels::axpy(1.0 / u.value.real(), w.data(), y, n);
        bump(c, 1);
        applied += 1;
        if (applied == total) return;  // final product update is never used
        op.apply(w.data(), t.data());
        kernels::axpy(-1.0 / u.value.real(), t.data(), w.data(), n);
        bump(c, 1);
      } else {
        double a2 = std::norm(u.value);
        double c1 = 2.0 * u.value.real() / a2;
        double c2 = 1.0 / a2;
        op.apply(w.data(), t.data());
        kernels::axpy(c1, w.data(), y, n);
        kernels::axpy(-c2, t.data(), y, n);
        bump(c, 2);
        applied += 2;
        if (applied == total) return;
        op.apply(t.data(), s.data());
        kernels::axpy(-c1, t.data(), w.data(), n);
        kernels::axpy(c2, s.data(), w.data(), n);
        bump(c, 2);
      }
    }
  }
}

RootPoly RootPoly::with_appended(Complex root, RootTag tag) const {
  check_nonzero_root(root);
  auto units = roots_;
  double im_tol = 1e-14 * std::abs(root);
  bool pair = std::abs(root.imag()) > im_tol;
  Complex val = pair ? Complex(root.real(), std::abs(root.imag())) : Complex(root.real(), 0.0);
  units.push_back({val, 1, pair, tag});
  return RootPoly(leja_order_units(std::move(units)));
}

RootPoly RootPoly::with_removed(std::size_t unit_index) const {
  auto units = roots_;
  if (unit_index >= units.size()) throw std::out_of_range("root unit index");
  if (units[unit_index].multiplicity > 1) {
    units[unit_index].multiplicity -= 1;
  } else {
    units.erase(units.begin() + static_cast<std::ptrdiff_t>(unit_index));
  }
  return RootPoly(std::move(units));
}

PofReport pof(const RootPoly& poly) {
  const auto& units = poly.roots();
  constexpr double kNegInf = -std::numeric_limits<double>::infinity();
  const double log_floor10 = kLogFloor / std::log(10.0);

  PofReport rep;
  rep.entries.reserve(units.size());
  for (std::size_t j = 0; j < units.size(); ++j) {
    PofEntry e;
    e.root = units[j].value;
    e.multiplicity = units[j].multiplicity;
    e.is_pair = units[j].is_pair;
    e.tag = units[j].tag;
    e.side = units[j].value.real() > 0 ? 1 : (units[j].value.real() < 0 ? -1 : 0);

    if (units[j].multiplicity > 1) {
      e.log10_pof = kNegInf;  // a repeated root has a coincident factor
      rep.entries.push_back(e);
      continue;
    }
    double sum = 0.0;
    bool coincident = false;
    auto add_factor = [&](Complex theta_i) {
      Complex f = 1.0 - units[j].value / theta_i;
      double a = std::abs(f);
      if (a == 0.0) {
        coincident = true;
        sum += log_floor10;
      } else {
        sum += std::log10(a);
      }
    };
    for (std::size_t i = 0; i < units.size(); ++i) {
      if (i == j) {
        if (units[i].is_pair) add_factor(std::conj(units[i].value));
        continue;
      }
      for (int m = 0; m < units[i].multiplicity; ++m) {
        add_factor(units[i].value);
        if (units[i].is_pair) add_factor(std::conj(units[i].value));
      }
    }
    e.log10_pof = coincident ? kNegInf : sum;
    e.coincident = coincident;
    rep.entries.push_back(e);
  }
  for (const auto& e : rep.entries) rep.max_log10 = std::max(rep.max_log10, e.log10_pof);
  return rep;
}

RootPoly add_root_copies(const RootPoly& poly, const PofReport& report, double pofcutoff_log10,
                         const std::function<bool(const PofEntry&)>& filter) {
  auto units = poly.roots();
  if (report.entries.size() != units.size())
    throw std::invalid_argument("pof report does not match polynomial");
  for (std::size_t j = 0; j < units.size(); ++j) {
    const auto& e = report.entries[j];
    if (!std::isfinite(e.log10_pof) || e.log10_pof <= pofcutoff_log10) continue;
    if (filter && !filter(e)) continue;
    int copies = static_cast<int>(std::ceil((e.log10_pof - pofcutoff_log10) / 14.0));
    units[j].multiplicity += copies;
    units[j].tag = RootTag::Stability;
  }
  return RootPoly(std::move(units));
}

std::vector<Complex> spectrum_image(const PrecPoly& poly, const std::vector<Complex>& eigenvalues) {
  std::vector<Complex> out;
  out.reserve(eigenvalues.size());
  for (Complex z : eigenvalues) out.push_back(poly.phi_eval(z));
  return out;
}

// ---- Newton-form polynomial ---------------------------------------------

Complex NewtonPoly::p_eval(Complex z) const {
  const std::size_t k = g_.size();
  Complex n_prev(0, 0), n_cur = Complex(1.0 / sigma_[0], 0);
  Complex s = g_[0] * n_cur;
  for (std::size_t j = 1; j < k; ++j) {
    Complex n_next = ((z - re_[j - 1]) * n_cur + im2_[j - 1] * n_prev) / sigma_[j];
    n_prev = n_cur;
    n_cur = n_next;
    s += g_[j] * n_cur;
  }
  return z * s;
}

Complex NewtonPoly::phi_eval(Complex z) const { return z * p_eval(z); }

Complex NewtonPoly::phi_deriv(Complex z) const {
  // phi = z^2 S(z); track S and S' through the Newton recurrence
  const std::size_t k = g_.size();
  Complex n_prev(0, 0), n_cur = Complex(1.0 / sigma_[0], 0), d_prev(0, 0), d_cur(0, 0);
  Complex s = g_[0] * n_cur, sp = g_[0] * d_cur;
  for (std::size_t j = 1; j < k; ++j) {
    Complex n_next = ((z - re_[j - 1]) * n_cur + im2_[j - 1] * n_prev) / sigma_[j];
    Complex d_next = (n_cur + (z - re_[j - 1]) * d_cur + im2_[j - 1] * d_prev) / sigma_[j];
    n_prev = n_cur;
    n_cur = n_next;
    d_prev = d_cur;
    d_cur = d_next;
    s += g_[j] * n_cur;
    sp += g_[j] * d_cur;
  }
  return 2.0 * z * s + z * z * sp;
}

void NewtonPoly::p_apply(const LinearOperator& op, const double* v, double* y,
                         Counters* c) const {
  const std::size_t n = op.n();
  const std::size_t k = g_.size();
  std::vector<double> t_prev(n, 0.0), t_cur(n), t_next(n);
  op.apply(v, t_cur.data());  // t_1 = A v / sigma_1
  kernels::scal(1.0 / sigma_[0], t_cur.data(), n);
  std::fill(y, y + n, 0.0);
  kernels::axpy(g_[0], t_cur.data(), y, n);
  bump(c, 2);
  for (std::size_t j = 1; j < k; ++j) {
    op.apply(t_cur.data(), t_next.data());
    kernels::axpy(-re_[j - 1], t_cur.data(), t_next.data(), n);
    if (im2_[j - 1] != 0.0) kernels::axpy(im2_[j - 1], t_prev.data(), t_next.data(), n);
    kernels::scal(1.0 / sigma_[j], t_next.data(), n);
    std::swap(t_prev, t_cur);
    std::swap(t_cur, t_next);
    kernels::axpy(g_[j], t_cur.data(), y, n);
    bump(c, 4);
  }
}

void NewtonPoly::phi_apply(const LinearOperator& op, const double* v, double* y,
                           Counters* c) const {
  const std::size_t n = op.n();
  std::vector<double> p(n);
  p_apply(op, v, p.data(), c);
  op.apply(p.data(), y);
}

// ---- composite polynomial -----------------------------------------------

namespace {
// non-owning shared_ptr so a transient wrapper can reuse the OperatorPtr API
OperatorPtr borrow(const LinearOperator& op) {
  return OperatorPtr(std::shared_ptr<void>(), &op);
}
}  // namespace

void CompositePoly::phi_apply(const LinearOperator& op, const double* v, double* y,
                              Counters* c) const {
  PreconditionedOp inner_op(borrow(op), inner_, c);
  outer_->phi_apply(inner_op, v, y, c);
}

void CompositePoly::p_apply(const LinearOperator& op, const double* v, double* y,
                            Counters* c) const {
  // x = p_in(A) p_out(phi_in(A)) y
  PreconditionedOp inner_op(borrow(op), inner_, c);
  std::vector<double> t(op.n());
  outer_->p_apply(inner_op, v, t.data(), c);
  inner_->p_apply(op, t.data(), y, c);
}

}  // namespace ppk
