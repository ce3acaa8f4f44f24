#include "ppk/drivers.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "ppk/eig.hpp"
#include "ppk/kernels.hpp"

namespace ppk {

void PPGmresConfig::validate() const {
  if (d < 1 || m < 1) throw std::invalid_argument("pp_gmres requires d >= 1 and m >= 1");
  if (!(tol > 0)) throw std::invalid_argument("pp_gmres requires tol > 0");
  if (balance != "none" && balance != "b1" && balance != "b2" && balance != "b3" &&
      balance != "b4" && balance != "b5")
    throw std::invalid_argument("unknown balance method: " + balance);
}

RootPoly gmres_polynomial(const LinearOperator& op, const std::vector<double>& v0, int d,
                          Counters* c) {
  ArnoldiFactorization fac = arnoldi(op, v0, d, true, c);
  return RootPoly::from_roots(harmonic_ritz_values(fac), RootTag::Gmres);
}

PPGmresResult pp_gmres(const OperatorPtr& op, const std::vector<double>& b,
                       const PPGmresConfig& cfg) {
  cfg.validate();
  const std::size_t n = static_cast<std::size_t>(op->n());
  if (b.size() != n) throw std::invalid_argument("right-hand side length mismatch");

  PPGmresResult res;
  res.report.seed = cfg.seed;
  res.report.balance = cfg.balance;
  Counters counters;
  const std::int64_t mv0 = op->matvec_count();

  // step 1: polynomial from GMRES(d) on a random normalized vector, balanced
  // and stabilized; DegreeTooHigh shrinks d by 10% and rebuilds
  Rng rng(cfg.seed, 0);
  std::vector<double> v0 = rng.unit_vector(n);

  int d = cfg.d;
  PolyPtr poly;
  std::vector<std::vector<double>> deflation_basis;
  ArnoldiFactorization fac;  // kept for the definiteness diagnostic
  for (int attempt = 0;; ++attempt) {
    try {
      fac = arnoldi(*op, v0, d, true, &counters);
      RootPoly base = RootPoly::from_roots(harmonic_ritz_values(fac), RootTag::Gmres);

      BalanceOutcome bal = apply_balance(cfg.balance, base, *op, v0, &counters);
      if (!bal.note.empty()) res.report.notes += bal.note + "; ";
      if (bal.ill_conditioned) res.report.notes += "balance basis ill-conditioned; ";

      if (auto* rp = dynamic_cast<const RootPoly*>(bal.poly.get())) {
        if (cfg.stability_enabled) {
          StabilizeResult st = stabilize_indefinite(*rp, *op, v0, cfg.stability, &counters);
          res.report.added_copies = st.added_copies;
          res.pof_report = st.report;
          res.correction.spurious_roots = st.spurious_count;
          if (!st.notes.empty()) res.report.notes += st.notes;
          poly = std::make_shared<RootPoly>(st.poly);
          res.roots = st.poly.root_values();
          // deflation basis saved for the correction phase
          deflation_basis = realize_deflation_basis(st.deflation_candidates,
                                                    cfg.stability.max_deflation_vectors);
        } else {
          poly = bal.poly;
          res.pof_report = pof(*rp);
          res.roots = rp->root_values();
        }
        res.spline = spline_definiteness_test(*dynamic_cast<const RootPoly*>(poly.get()),
                                              ritz_values(fac));
        if (!res.spline.pass) res.report.notes += "definiteness test flagged interval(s); ";
      } else {
        poly = bal.poly;  // Newton/composite forms carry no root list
      }
      break;
    } catch (const DegreeTooHigh& e) {
      res.report.degree_retries += 1;
      if (attempt + 1 >= cfg.degree_retries)
        throw ConvergenceError("polynomial degree unusable after retries (pof 1e" +
                               std::to_string(e.log10_pof) + ")");
      d = std::max(1, d - (d + 9) / 10);  // shrink by 10%, at least one
      res.report.notes += "degree reduced to " + std::to_string(d) + "; ";
    }
  }
  res.poly = poly;
  res.report.degree = poly->degree();

  // step 2: restarted GMRES on phi(A), then x = p(A) y
  PreconditionedOp pre(op, poly, &counters);
  GmresConfig gc;
  gc.m = cfg.m;
  gc.tol = cfg.tol;
  gc.max_cycles = cfg.max_cycles;
  gc.reorthogonalize = cfg.reorthogonalize_cycles;
  gc.verify = cfg.verify_true_residual;
  gc.max_matvecs = cfg.max_mvp > 0 ? std::max<std::int64_t>(1, cfg.max_mvp / poly->degree()) : -1;
  SolveReport inner = res.report;  // carry fields through
  std::vector<double> y = restarted_gmres(pre, b, {}, gc, inner, &counters);
  res.report = inner;

  res.x.assign(n, 0.0);
  poly->p_apply(*op, y.data(), res.x.data(), &counters);

  // correction phase: compare true residual against the shortcut track
  const double bnorm = kernels::nrm2(b.data(), n);
  std::vector<double> r(n);
  auto true_resnorm = [&](const std::vector<double>& x) {
    op->apply(x.data(), r.data());
    double s = 0;
    for (std::size_t i = 0; i < n; ++i) {
      double dd = b[i] - r[i];
      s += dd * dd;
    }
    counters.vecops += 1;
    return std::sqrt(s) / bnorm;
  };
  if (cfg.verify_true_residual) {
    double tr = true_resnorm(res.x);
    res.report.final_true_resnorm = tr;
    res.correction.resnorm_before = tr;
    if (tr > 10.0 * std::max(res.report.final_resnorm, cfg.tol)) {
      bool skipped = false;
      res.x = galerkin_deflation(*op, res.x, b, deflation_basis, &skipped, &counters);
      res.correction.deflation_skipped = skipped;
      res.correction.deflation_vectors = static_cast<int>(deflation_basis.size());
      res.correction.resnorm_after_deflation = true_resnorm(res.x);
      res.x = gmres_correction(*op, res.x, b, cfg.stability.gmres_correction_iters, &counters);
      res.correction.resnorm_after_gmres = true_resnorm(res.x);
      res.report.final_true_resnorm = res.correction.resnorm_after_gmres;
      res.report.correction_applied = true;
      res.report.correction_resnorm = res.correction.resnorm_after_gmres;
      res.report.converged = res.report.converged &&
                             res.report.final_true_resnorm <= 10.0 * cfg.tol;
    }
  }

  res.report.matvecs = op->matvec_count() - mv0;
  res.report.counters = counters;
  res.report.seed = cfg.seed;
  return res;
}

// ---- interior eigensolver -------------------------------------------------

void EigenConfig::validate() const {
  if (!(m > k && k >= nev && nev >= 1))
    throw std::invalid_argument("eigensolver requires m > k >= nev >= 1");
  if (d < 1 || !(tol > 0)) throw std::invalid_argument("eigensolver requires d >= 1, tol > 0");
}

namespace {

// pi(B) = I - phi(B): maps the wanted cluster (B eigenvalues near 0) to ~1
// and the rest of the spectrum toward 0, so Arnoldi finds interior pairs as
// dominant ones
class PiOp final : public LinearOperator {
 public:
  PiOp(OperatorPtr base, PolyPtr poly, Counters* c)
      : LinearOperator(base->n()), base_(std::move(base)), poly_(std::move(poly)), c_(c) {}

 protected:
  void apply_raw(const double* x, double* y) const override {
    poly_->phi_apply(*base_, x, y, c_);
    for (int i = 0; i < n(); ++i) y[i] = x[i] - y[i];
    if (c_) c_->vecops += 1;
  }

 private:
  OperatorPtr base_;
  PolyPtr poly_;
  Counters* c_;
};

struct RitzUnit {
  Complex value;      // eigenvalue of the projected matrix (pi-space)
  int first = 0;      // column in the EigenPairs
  bool pair = false;
};

// group eigen-decomposition columns into real/pair units sorted by |value|
// descending (dominant in pi-space first)
std::vector<RitzUnit> dominant_units(const EigenPairs& ep) {
  std::vector<RitzUnit> units;
  for (int i = 0; i < static_cast<int>(ep.values.size()); ++i) {
    if (ep.values[static_cast<std::size_t>(i)].imag() > 0) {
      units.push_back({ep.values[static_cast<std::size_t>(i)], i, true});
      ++i;  // conjugate partner
    } else if (ep.values[static_cast<std::size_t>(i)].imag() == 0) {
      units.push_back({ep.values[static_cast<std::size_t>(i)], i, false});
    }
  }
  std::sort(units.begin(), units.end(),
            [](const RitzUnit& x, const RitzUnit& y) { return std::abs(x.value) > std::abs(y.value); });
  return units;
}

}  // namespace

EigenResult pp_arnoldi_interior(const OperatorPtr& op, const EigenConfig& cfg) {
  cfg.validate();
  const int n = op->n();
  const std::size_t un = static_cast<std::size_t>(n);
  const std::int64_t mv0 = op->matvec_count();
  Counters counters;

  EigenResult res;
  res.seed = cfg.seed;

  OperatorPtr B = shifted_operator(op, cfg.sigma);

  // polynomial from GMRES(d) on the shifted operator, balanced about sigma
  Rng rng(cfg.seed, 0);
  std::vector<double> v0 = rng.unit_vector(un);
  RootPoly base = gmres_polynomial(*B, v0, cfg.d, &counters);
  PolyPtr poly;
  if (cfg.balance == "none") {
    poly = std::make_shared<RootPoly>(base);
  } else if (cfg.balance == "b1") {
    poly = balance1(base).poly;
  } else if (cfg.balance == "b5") {
    double a = 0;
    for (const auto& u : base.roots()) a = std::max(a, std::abs(u.value.real()));
    poly = balance5(base, a).poly;
  } else {
    throw std::invalid_argument("eigensolver balance must be none, b1 or b5");
  }
  res.degree = poly->degree();

  PiOp C(B, poly, &counters);

  const int m = cfg.m;
  DenseMatrix V(n, m + 1), H(m + 1, m);
  std::vector<double> w(un), h(static_cast<std::size_t>(m + 1));
  {
    auto v = rng.split(1).unit_vector(un);
    std::copy(v.begin(), v.end(), V.col(0));
  }

  auto arnoldi_extend = [&](int j0) {
    for (int j = j0; j < m; ++j) {
      C.apply(V.col(j), w.data());
      std::fill(h.begin(), h.end(), 0.0);
      for (int pass = 0; pass < 2; ++pass) {  // CGS with reorthogonalization
        for (int i = 0; i <= j; ++i) {
          double p = kernels::dot(V.col(i), w.data(), un);
          kernels::axpy(-p, V.col(i), w.data(), un);
          h[static_cast<std::size_t>(i)] += p;
        }
        counters.dots += j + 1;
        counters.vecops += j + 1;
      }
      for (int i = 0; i <= j; ++i) H(i, j) = h[static_cast<std::size_t>(i)];
      double nn = kernels::nrm2(w.data(), un);
      H(j + 1, j) = nn;
      if (nn == 0) throw BreakdownError("invariant subspace in eigensolver Arnoldi");
      for (int i = 0; i < n; ++i) V(i, j + 1) = w[static_cast<std::size_t>(i)] / nn;
      counters.vecops += 1;
    }
  };

  std::vector<double> zr(un), zi(un), azr(un), azi(un);
  int j0 = 0;
  for (int cycle = 1; cycle <= cfg.max_cycles; ++cycle) {
    arnoldi_extend(j0);
    res.cycles = cycle;

    DenseMatrix M(m, m);
    for (int j = 0; j < m; ++j)
      for (int i = 0; i < m; ++i) M(i, j) = H(i, j);
    DenseMatrix Mx = M;
    if (cfg.harmonic_ritz) {  // eig of M + h^2 f e_m^T, f = M^{-T} e_m
      const double h2 = H(m, m - 1) * H(m, m - 1);
      std::vector<double> f = adjoint_solve_last_column(M);
      for (int i = 0; i < m; ++i) Mx(i, m - 1) += h2 * f[static_cast<std::size_t>(i)];
    }
    EigenPairs ep = eig_small_dense_full(Mx);
    auto units = dominant_units(ep);

    // residuals against A itself for the dominant pairs (up to the retained
    // set); dominance in pi-space drives the restart, but the report picks
    // converged values nearest the target so well-separated extreme
    // eigenvalues do not crowd out the wanted cluster
    struct Cand {
      Complex rho;
      double resid;
    };
    std::vector<Cand> cands;
    int counted = 0;
    for (const auto& u : units) {
      if (counted >= cfg.k) break;
      // Ritz vector z = V(:,1..m) y in complex arithmetic
      std::fill(zr.begin(), zr.end(), 0.0);
      std::fill(zi.begin(), zi.end(), 0.0);
      for (int jj = 0; jj < m; ++jj) {
        Complex yc = ep.vec(jj, u.first);
        kernels::axpy(yc.real(), V.col(jj), zr.data(), un);
        if (u.pair) kernels::axpy(yc.imag(), V.col(jj), zi.data(), un);
      }
      counters.vecops += u.pair ? 2 * m : m;
      op->apply(zr.data(), azr.data());
      if (u.pair) op->apply(zi.data(), azi.data());
      else std::fill(azi.begin(), azi.end(), 0.0);
      // rho = z^H A z / z^H z
      Complex num(0, 0);
      double den = 0;
      for (std::size_t i = 0; i < un; ++i) {
        Complex z(zr[i], u.pair ? zi[i] : 0.0);
        Complex az(azr[i], u.pair ? azi[i] : 0.0);
        num += std::conj(z) * az;
        den += std::norm(z);
      }
      counters.dots += 2;
      Complex rho = num / den;
      double rnum = 0;
      for (std::size_t i = 0; i < un; ++i) {
        Complex z(zr[i], u.pair ? zi[i] : 0.0);
        Complex az(azr[i], u.pair ? azi[i] : 0.0);
        rnum += std::norm(az - rho * z);
      }
      counters.dots += 1;
      double resid = std::sqrt(rnum / den);

      cands.push_back({rho, resid});
      ++counted;
      if (u.pair) {
        cands.push_back({std::conj(rho), resid});
        ++counted;
      }
    }

    // converged when the nev candidates nearest the target are all resolved
    std::vector<std::size_t> pool(cands.size());
    for (std::size_t i = 0; i < pool.size(); ++i) pool[i] = i;
    std::stable_sort(pool.begin(), pool.end(), [&](std::size_t x, std::size_t y) {
      return std::abs(cands[x].rho - cfg.sigma) < std::abs(cands[y].rho - cfg.sigma);
    });
    if (static_cast<int>(pool.size()) > cfg.nev) pool.resize(static_cast<std::size_t>(cfg.nev));
    bool enough = static_cast<int>(pool.size()) >= cfg.nev;
    res.values.clear();
    res.residuals.clear();
    for (std::size_t i : pool) {
      res.values.push_back(cands[i].rho);
      res.residuals.push_back(cands[i].resid);
      enough = enough && cands[i].resid <= cfg.tol;
    }
    if (enough) {
      res.converged = true;
      break;
    }
    if (cycle == cfg.max_cycles) break;

    // thick restart: keep ~k dominant Ritz vectors of the projected matrix
    std::vector<RitzUnit> keep;
    int kc = 0;
    for (const auto& u : units) {
      if (kc >= cfg.k) break;
      keep.push_back(u);
      kc += u.pair ? 2 : 1;
    }
    const int ke = kc;  // realized retained dimension (<= k+1)

    // real basis W (m x ke) from the selected eigenvectors, orthonormalized
    DenseMatrix W(m, ke);
    int col = 0;
    for (const auto& u : keep) {
      for (int i = 0; i < m; ++i) W(i, col) = ep.vec(i, u.first).real();
      ++col;
      if (u.pair) {
        for (int i = 0; i < m; ++i) W(i, col) = ep.vec(i, u.first).imag();
        ++col;
      }
    }
    for (int j = 0; j < ke; ++j) {  // modified Gram-Schmidt
      for (int i = 0; i < j; ++i) {
        double p = kernels::dot(W.col(i), W.col(j), static_cast<std::size_t>(m));
        kernels::axpy(-p, W.col(i), W.col(j), static_cast<std::size_t>(m));
      }
      double nn = kernels::nrm2(W.col(j), static_cast<std::size_t>(m));
      if (nn == 0) throw NumericalError("degenerate restart basis");
      kernels::scal(1.0 / nn, W.col(j), static_cast<std::size_t>(m));
    }

    // projected block S = W^T M W and residual row b' = h_{m+1,m} e_m^T W
    DenseMatrix S(ke, ke);
    for (int j = 0; j < ke; ++j) {
      auto mw = matvec(M, std::vector<double>(W.col(j), W.col(j) + m));
      for (int i = 0; i < ke; ++i)
        S(i, j) = kernels::dot(W.col(i), mw.data(), static_cast<std::size_t>(m));
    }
    const double hm = H(m, m - 1);

    // V_new(:,j) = V(:,1..m) W(:,j); the (m+1)-th vector carries over
    DenseMatrix Vnew(n, m + 1);
    for (int j = 0; j < ke; ++j)
      for (int jj = 0; jj < m; ++jj)
        kernels::axpy(W(jj, j), V.col(jj), Vnew.col(j), un);
    counters.vecops += static_cast<std::int64_t>(ke) * m;
    std::copy(V.col(m), V.col(m) + n, Vnew.col(ke));
    V = std::move(Vnew);

    H = DenseMatrix(m + 1, m);
    for (int j = 0; j < ke; ++j) {
      for (int i = 0; i < ke; ++i) H(i, j) = S(i, j);
      H(ke, j) = hm * W(m - 1, j);
    }
    j0 = ke;  // subspace dimension after restart = ke + 1 basis vectors
  }

  // report in A-space, sorted by distance to the target
  std::vector<std::size_t> order(res.values.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::stable_sort(order.begin(), order.end(), [&](std::size_t x, std::size_t y) {
    return std::abs(res.values[x] - cfg.sigma) < std::abs(res.values[y] - cfg.sigma);
  });
  std::vector<Complex> vals;
  std::vector<double> rs;
  for (std::size_t i : order) {
    vals.push_back(res.values[i]);
    rs.push_back(res.residuals[i]);
  }
  res.values = std::move(vals);
  res.residuals = std::move(rs);

  if (!res.values.empty()) {
    double dmed = std::abs(res.values[res.values.size() / 2] - cfg.sigma);
    double dmax = std::abs(res.values.back() - cfg.sigma);
    if (dmax > 20.0 * std::max(dmed, 1e-300) && dmax > 1.0)
      res.warning = "returned eigenvalues stray far from the target; "
                    "polynomial may be unbalanced or degree too high";
  }
  res.matvecs = op->matvec_count() - mv0;
  return res;
}

}  // namespace ppk
