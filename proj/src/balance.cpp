#include "ppk/balance.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "ppk/eig.hpp"
#include "ppk/kernels.hpp"

namespace ppk {

namespace {

double phi_deriv0(const PrecPoly& p) { return p.phi_deriv(Complex(0, 0)).real(); }

// log-magnitude + sign evaluation of pi(x) at real x, overflow-safe
std::pair<double, int> log_pi_real(const RootPoly& poly, double x) {
  double lg = 0.0;
  int sign = 1;
  for (const auto& u : poly.roots()) {
    for (int m = 0; m < u.multiplicity; ++m) {
      if (u.is_pair) {
        Complex f = 1.0 - x / u.value;
        double a = std::abs(f);
        lg += a > 0 ? 2.0 * std::log(a) : -1490.0;
      } else {
        double f = 1.0 - x / u.value.real();
        if (f < 0) {
          sign = -sign;
          f = -f;
        }
        lg += f > 0 ? std::log(f) : -745.0;
      }
    }
  }
  return {lg, sign};
}

// Leja ordering that tolerates zero/near-zero values (Ritz shifts may sit at
// the origin); conjugate pairs stay adjacent, positive-imaginary first.
std::vector<Complex> leja_order_shifts(const std::vector<Complex>& vals) {
  struct Unit {
    Complex v;
    bool pair;
  };
  std::vector<Unit> units;
  for (Complex z : vals) {
    if (z.imag() > 0)
      units.push_back({z, true});
    else if (z.imag() == 0)
      units.push_back({z, false});
  }
  auto logd = [](Complex a, Complex b) {
    double d = std::abs(a - b);
    return d > 0 ? std::log(d) : -745.0;
  };
  std::vector<Complex> out;
  std::vector<bool> used(units.size(), false);
  std::vector<double> score(units.size(), 0.0);
  for (std::size_t picked = 0; picked < units.size(); ++picked) {
    std::size_t best = units.size();
    for (std::size_t i = 0; i < units.size(); ++i) {
      if (used[i]) continue;
      if (best == units.size()) best = i;
      else if (picked == 0 ? std::abs(units[i].v) > std::abs(units[best].v)
                           : score[i] > score[best])
        best = i;
    }
    if (best == units.size()) break;
    used[best] = true;
    out.push_back(units[best].v);
    if (units[best].pair) out.push_back(std::conj(units[best].v));
    for (std::size_t i = 0; i < units.size(); ++i) {
      if (used[i]) continue;
      score[i] += logd(units[i].v, units[best].v);
      if (units[best].pair) score[i] += logd(units[i].v, std::conj(units[best].v));
    }
  }
  return out;
}

OperatorPtr borrow(const LinearOperator& op) {
  return OperatorPtr(std::shared_ptr<void>(), &op);
}

// symmetric positive (semi-)definite condition estimate by power iteration
double spd_condition_estimate(const DenseMatrix& G) {
  const int k = G.rows;
  if (k == 1) return 1.0;
  std::vector<double> x(static_cast<std::size_t>(k), 1.0);
  double lmax = 0;
  for (int it = 0; it < 50; ++it) {
    auto y = matvec(G, x);
    double nn = kernels::nrm2(y.data(), y.size());
    if (nn == 0) return std::numeric_limits<double>::infinity();
    for (auto& v : y) v /= nn;
    lmax = nn;
    x = std::move(y);
  }
  // inverse iteration for the small end
  std::fill(x.begin(), x.end(), 1.0);
  double lmin_inv = 0;
  for (int it = 0; it < 50; ++it) {
    std::vector<double> y;
    try {
      y = solve_dense(G, x);
    } catch (const SingularMatrixError&) {
      return std::numeric_limits<double>::infinity();
    }
    double nn = kernels::nrm2(y.data(), y.size());
    if (nn == 0) return std::numeric_limits<double>::infinity();
    for (auto& v : y) v /= nn;
    lmin_inv = nn;
    x = std::move(y);
  }
  return lmax * lmin_inv;
}

}  // namespace

BalanceOutcome balance1(const RootPoly& poly) {
  BalanceOutcome out;
  out.phi_deriv0_before = phi_deriv0(poly);
  double s = out.phi_deriv0_before;
  if (s == 0.0) {
    out.poly = std::make_shared<RootPoly>(poly);
    out.phi_deriv0_after = s;
    out.note = "phi'(0) already zero; unchanged";
    return out;
  }
  double eta = -1.0 / s;
  auto balanced = std::make_shared<RootPoly>(poly.with_appended(Complex(eta, 0), RootTag::Balance));
  out.poly = balanced;
  out.changed = true;
  out.phi_deriv0_after = phi_deriv0(*balanced);
  out.note = "appended balancing root";
  return out;
}

BalanceOutcome balance2(const RootPoly& poly) {
  BalanceOutcome out;
  double s = phi_deriv0(poly);
  out.phi_deriv0_before = s;
  if (s == 0.0) {
    out.poly = std::make_shared<RootPoly>(poly);
    out.note = "phi'(0) already zero; unchanged";
    return out;
  }
  // derivative contribution of each root unit
  const auto& units = poly.roots();
  int best = -1;
  double best_gap = std::abs(s);
  for (std::size_t j = 0; j < units.size(); ++j) {
    double xi = units[j].is_pair ? 2.0 * units[j].value.real() / std::norm(units[j].value)
                                 : 1.0 / units[j].value.real();
    double gap = std::abs(s - xi);
    if (gap < best_gap) {
      best_gap = gap;
      best = static_cast<int>(j);
    }
  }
  if (best < 0) {
    auto fb = balance1(poly);
    fb.note = "no removable root improves phi'(0); fell back to single appended root";
    return fb;
  }
  double xi = units[static_cast<std::size_t>(best)].is_pair
                  ? 2.0 * units[static_cast<std::size_t>(best)].value.real() /
                        std::norm(units[static_cast<std::size_t>(best)].value)
                  : 1.0 / units[static_cast<std::size_t>(best)].value.real();
  RootPoly trimmed = poly.with_removed(static_cast<std::size_t>(best));
  double s2 = s - xi;
  std::shared_ptr<RootPoly> balanced;
  if (s2 == 0.0) {
    balanced = std::make_shared<RootPoly>(std::move(trimmed));
    out.note = "removed one root; phi'(0) exactly zero without a compensator";
  } else {
    balanced = std::make_shared<RootPoly>(
        trimmed.with_appended(Complex(-1.0 / s2, 0), RootTag::Balance));
    out.note = "removed one root and appended a compensating root";
  }
  out.poly = balanced;
  out.changed = true;
  out.phi_deriv0_after = phi_deriv0(*balanced);
  return out;
}

BalanceOutcome balance5(const RootPoly& poly, double a) {
  BalanceOutcome out;
  out.phi_deriv0_before = phi_deriv0(poly);
  auto [lp, sp] = log_pi_real(poly, a);
  auto [lm, sm] = log_pi_real(poly, -a);
  double beta = sp * sm * std::exp(lp - lm);  // pi(a)/pi(-a)
  if (std::abs(beta - 1.0) < 1e-12 * (std::abs(beta) + 1.0)) {
    out.poly = std::make_shared<RootPoly>(poly);
    out.phi_deriv0_after = out.phi_deriv0_before;
    out.note = "endpoint ratio ~ 1; unchanged";
    return out;
  }
  double eta = a * (beta + 1.0) / (beta - 1.0);
  auto balanced = std::make_shared<RootPoly>(poly.with_appended(Complex(eta, 0), RootTag::Balance));
  out.poly = balanced;
  out.changed = true;
  out.phi_deriv0_after = phi_deriv0(*balanced);
  out.note = "appended endpoint-ratio balancing root";
  return out;
}

BalanceOutcome balance3(const LinearOperator& op, const std::vector<double>& b, int d,
                        Counters* c) {
  const int n = op.n();
  const std::size_t un = static_cast<std::size_t>(n);
  BalanceOutcome out;
  out.phi_deriv0_before = std::numeric_limits<double>::quiet_NaN();

  std::vector<double> u(un);
  op.apply(b.data(), u.data());  // Krylov space seeded with A b

  ArnoldiFactorization fac = arnoldi(op, u, d, true, c);
  const int k = fac.steps;  // columns of the Newton basis
  std::vector<Complex> shifts = leja_order_shifts(ritz_values(fac));

  // Newton basis: v_1 = u/||u||, each transition applies one shift; a
  // conjugate pair consumes two transitions and couples back two columns.
  DenseMatrix V(n, k), W(n, k);  // W = A V
  std::vector<double> re(static_cast<std::size_t>(std::max(0, k - 1)));
  std::vector<double> im2(static_cast<std::size_t>(std::max(0, k - 1)), 0.0);
  std::vector<double> sigma(static_cast<std::size_t>(k));

  sigma[0] = kernels::nrm2(u.data(), un);
  if (sigma[0] == 0) throw BreakdownError("balance basis start vector A*b is zero");
  for (int i = 0; i < n; ++i) V(i, 0) = u[static_cast<std::size_t>(i)] / sigma[0];

  std::size_t shift_pos = 0;
  int t = 0;
  std::vector<double> w(un);
  while (t < k - 1) {
    Complex th = shift_pos < shifts.size() ? shifts[shift_pos] : Complex(0, 0);
    bool pair = th.imag() != 0.0 && (t + 2 <= k - 1);  // room for both members?
    double thr = th.real();
    double thi = pair ? th.imag() : 0.0;
    // first member
    op.apply(V.col(t), W.col(t));
    std::copy(W.col(t), W.col(t) + n, w.data());
    kernels::axpy(-thr, V.col(t), w.data(), un);
    re[static_cast<std::size_t>(t)] = thr;
    sigma[static_cast<std::size_t>(t + 1)] = kernels::nrm2(w.data(), un);
    if (sigma[static_cast<std::size_t>(t + 1)] == 0)
      throw BreakdownError("Newton basis breakdown");
    for (int i = 0; i < n; ++i)
      V(i, t + 1) = w[static_cast<std::size_t>(i)] / sigma[static_cast<std::size_t>(t + 1)];
    if (c) c->vecops += 3;
    ++t;
    if (pair) {
      op.apply(V.col(t), W.col(t));
      std::copy(W.col(t), W.col(t) + n, w.data());
      kernels::axpy(-thr, V.col(t), w.data(), un);
      double cross = thi * thi / sigma[static_cast<std::size_t>(t)];
      kernels::axpy(cross, V.col(t - 1), w.data(), un);
      re[static_cast<std::size_t>(t)] = thr;
      im2[static_cast<std::size_t>(t)] = cross;
      sigma[static_cast<std::size_t>(t + 1)] = kernels::nrm2(w.data(), un);
      if (sigma[static_cast<std::size_t>(t + 1)] == 0)
        throw BreakdownError("Newton basis breakdown");
      for (int i = 0; i < n; ++i)
        V(i, t + 1) = w[static_cast<std::size_t>(i)] / sigma[static_cast<std::size_t>(t + 1)];
      if (c) c->vecops += 4;
      ++t;
      shift_pos += 2;
    } else {
      shift_pos += th.imag() != 0.0 ? 2 : 1;  // truncated pair: drop partner
    }
  }
  op.apply(V.col(k - 1), W.col(k - 1));

  // least squares min ||b - (A V) g|| by normal equations
  DenseMatrix G(k, k);
  std::vector<double> rhs(static_cast<std::size_t>(k));
  for (int j = 0; j < k; ++j) {
    for (int i = 0; i <= j; ++i) {
      double v = kernels::dot(W.col(i), W.col(j), un);
      G(i, j) = v;
      G(j, i) = v;
    }
    rhs[static_cast<std::size_t>(j)] = kernels::dot(W.col(j), b.data(), un);
  }
  if (c) c->dots += static_cast<std::int64_t>(k) * (k + 3) / 2;

  double cond = spd_condition_estimate(G);
  std::vector<double> g = solve_dense(G, rhs);

  auto poly = std::make_shared<NewtonPoly>(std::move(re), std::move(im2), std::move(sigma),
                                           std::move(g), cond > 1e14, cond);
  out.poly = poly;
  out.changed = true;
  out.gram_condition = cond;
  out.ill_conditioned = cond > 1e14;
  out.phi_deriv0_after = phi_deriv0(*poly);  // structurally zero
  out.note = out.ill_conditioned
                 ? "minimum-residual polynomial built; Gram matrix badly conditioned"
                 : "minimum-residual polynomial built";
  return out;
}

BalanceOutcome balance4(const LinearOperator& op, const std::vector<double>& b, int d_inner,
                        int d_outer, Counters* c) {
  BalanceOutcome inner = balance3(op, b, d_inner, c);
  PreconditionedOp pre(borrow(op), inner.poly, c);
  ArnoldiFactorization fac = arnoldi(pre, b, d_outer, true, c);
  auto outer =
      std::make_shared<RootPoly>(RootPoly::from_roots(harmonic_ritz_values(fac), RootTag::Gmres));

  BalanceOutcome out;
  out.poly = std::make_shared<CompositePoly>(inner.poly, outer);
  out.changed = true;
  out.gram_condition = inner.gram_condition;
  out.ill_conditioned = inner.ill_conditioned;
  out.phi_deriv0_before = std::numeric_limits<double>::quiet_NaN();
  out.phi_deriv0_after = phi_deriv0(*out.poly);  // structurally zero
  out.note = "composite polynomial: GMRES outer stage on the preconditioned operator";
  return out;
}

BalanceOutcome apply_balance(const std::string& method, const RootPoly& poly,
                             const LinearOperator& op, const std::vector<double>& b, Counters* c) {
  if (method == "none") {
    BalanceOutcome out;
    out.poly = std::make_shared<RootPoly>(poly);
    out.phi_deriv0_before = out.phi_deriv0_after = phi_deriv0(poly);
    out.note = "balancing disabled";
    return out;
  }
  if (method == "b1") return balance1(poly);
  if (method == "b2") return balance2(poly);
  if (method == "b5") {
    double a = 0;
    for (const auto& u : poly.roots()) a = std::max(a, std::abs(u.value.real()));
    return balance5(poly, a);
  }
  if (method == "b3") return balance3(op, b, std::max(1, poly.degree() - 1), c);
  if (method == "b4") {
    int d = std::max(2, poly.degree());
    int di = std::max(1, static_cast<int>(std::lround(std::sqrt(static_cast<double>(d)))) - 1);
    int dout = std::max(1, d / (di + 1));
    return balance4(op, b, di, dout, c);
  }
  throw std::invalid_argument("unknown balance method: " + method);
}

SplineReport spline_definiteness_test(const RootPoly& poly, const std::vector<Complex>& ritz) {
  SplineReport rep;
  std::vector<double> real_roots;
  for (const auto& u : poly.roots())
    if (!u.is_pair) real_roots.push_back(u.value.real());
  std::sort(real_roots.begin(), real_roots.end());
  if (real_roots.size() < 2) return rep;

  double rmin = std::numeric_limits<double>::infinity();
  double rmax = -std::numeric_limits<double>::infinity();
  for (Complex z : ritz) {
    rmin = std::min(rmin, z.real());
    rmax = std::max(rmax, z.real());
  }
  const bool have_ritz = !ritz.empty();

  for (std::size_t j = 0; j + 1 < real_roots.size(); ++j) {
    double tl = real_roots[j], tr = real_roots[j + 1];
    double h = tr - tl;
    if (h <= 0) continue;
    double dl = poly.pi_deriv_real(tl);
    double dr = poly.pi_deriv_real(tr);
    if (dl < 0) continue;              // pi dips negative: interval is fine
    if (dl == 0 && dr == 0) continue;  // repeated-root degeneracy
    rep.applicable = true;

    // Hermite cubic for pi on [tl, tr] built from endpoint slopes
    double a6 = 6.0 * (dr + dl) / (h * h);
    double bq = -(2.0 * dr + 4.0 * dl) / h;
    double cq = dl;
    auto cube = [&](double s) { return a6 * s * s * s / 6.0 + bq * s * s / 2.0 + cq * s; };

    double best_s = -1, best_v = -std::numeric_limits<double>::infinity();
    if (std::abs(a6) < 1e-300) {
      if (bq != 0) {
        double s = -cq / bq;
        if (s > 0 && s < h) {
          best_s = s;
          best_v = cube(s);
        }
      }
    } else {
      double disc = bq * bq - 2.0 * a6 * cq;
      if (disc >= 0) {
        double rdisc = std::sqrt(disc);
        for (double s : {(-bq + rdisc) / a6, (-bq - rdisc) / a6}) {
          if (s > 0 && s < h) {
            double v = cube(s);
            if (v > best_v) {
              best_v = v;
              best_s = s;
            }
          }
        }
      }
    }
    if (best_s < 0) continue;

    SplineInterval iv;
    iv.left = tl;
    iv.right = tr;
    iv.critical = tl + best_s;
    iv.value = best_v;
    if (best_v > 1.0) {
      bool eig_below = have_ritz && rmax > tl && rmax < iv.critical;
      bool eig_above = have_ritz && rmin > iv.critical && rmin < tr;
      iv.flagged = !eig_below && !eig_above;
    }
    rep.intervals.push_back(iv);
    if (iv.flagged) rep.pass = false;
  }
  return rep;
}

}  // namespace ppk
