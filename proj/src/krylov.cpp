#include "ppk/krylov.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "ppk/eig.hpp"
#include "ppk/kernels.hpp"

namespace ppk {

namespace {

void bump(Counters* c, std::int64_t vecops, std::int64_t dots = 0) {
  if (c) {
    c->vecops += vecops;
    c->dots += dots;
  }
}

// one classical Gram-Schmidt pass of w against V(:,0..j]; h accumulates
void cgs_pass(const DenseMatrix& V, int ncols, std::vector<double>& w, double* h, Counters* c) {
  const std::size_t n = static_cast<std::size_t>(V.rows);
  std::vector<double> proj(ncols);
  for (int i = 0; i < ncols; ++i) proj[i] = kernels::dot(V.col(i), w.data(), n);
  for (int i = 0; i < ncols; ++i) kernels::axpy(-proj[i], V.col(i), w.data(), n);
  for (int i = 0; i < ncols; ++i) h[i] += proj[i];
  bump(c, ncols, ncols);
}

}  // namespace

ArnoldiFactorization arnoldi(const LinearOperator& op, const std::vector<double>& v0, int m,
                             bool reorthogonalize, Counters* c) {
  const int n = op.n();
  const std::size_t un = static_cast<std::size_t>(n);
  ArnoldiFactorization fac;
  fac.V = DenseMatrix(n, m + 1);
  fac.H = DenseMatrix(m + 1, m);
  fac.beta = kernels::nrm2(v0.data(), un);
  bump(c, 0, 1);
  if (fac.beta == 0.0) throw BreakdownError("Arnoldi start vector is zero");
  for (int i = 0; i < n; ++i) fac.V(i, 0) = v0[static_cast<std::size_t>(i)] / fac.beta;
  bump(c, 1);

  std::vector<double> w(un);
  std::vector<double> h(m + 1);
  for (int j = 0; j < m; ++j) {
    op.apply(fac.V.col(j), w.data());
    double wnorm0 = kernels::nrm2(w.data(), un);
    bump(c, 0, 1);
    std::fill(h.begin(), h.end(), 0.0);
    cgs_pass(fac.V, j + 1, w, h.data(), c);
    if (reorthogonalize) cgs_pass(fac.V, j + 1, w, h.data(), c);
    double hnext = kernels::nrm2(w.data(), un);
    bump(c, 0, 1);
    for (int i = 0; i <= j; ++i) fac.H(i, j) = h[static_cast<std::size_t>(i)];
    fac.H(j + 1, j) = hnext;
    fac.steps = j + 1;
    if (hnext <= 1e-14 * wnorm0) {
      fac.breakdown = true;
      break;
    }
    for (int i = 0; i < n; ++i) fac.V(i, j + 1) = w[static_cast<std::size_t>(i)] / hnext;
    bump(c, 1);
  }
  if (fac.steps < m) {
    // shrink to the realized size
    DenseMatrix V(n, fac.steps + 1), H(fac.steps + 1, fac.steps);
    for (int j = 0; j <= fac.steps; ++j)
      std::copy(fac.V.col(j), fac.V.col(j) + n, V.col(j));
    for (int j = 0; j < fac.steps; ++j)
      for (int i = 0; i <= fac.steps; ++i) H(i, j) = fac.H(i, j);
    fac.V = std::move(V);
    fac.H = std::move(H);
  }
  return fac;
}

std::vector<Complex> ritz_values(const ArnoldiFactorization& fac) {
  const int m = fac.steps;
  DenseMatrix Hm(m, m);
  for (int j = 0; j < m; ++j)
    for (int i = 0; i < m; ++i) Hm(i, j) = fac.H(i, j);
  return eig_small_dense(std::move(Hm));
}

std::vector<Complex> harmonic_ritz_values(const ArnoldiFactorization& fac) {
  const int m = fac.steps;
  DenseMatrix Hm(m, m);
  for (int j = 0; j < m; ++j)
    for (int i = 0; i < m; ++i) Hm(i, j) = fac.H(i, j);
  double h2 = fac.H(m, m - 1);
  h2 *= h2;
  std::vector<double> f = adjoint_solve_last_column(Hm);  // H^{-T} e_m
  for (int i = 0; i < m; ++i) Hm(i, m - 1) += h2 * f[static_cast<std::size_t>(i)];
  return eig_small_dense(std::move(Hm));
}

std::vector<double> restarted_gmres(const LinearOperator& op, const std::vector<double>& b,
                                    std::vector<double> x0, const GmresConfig& cfg,
                                    SolveReport& report, Counters* c) {
  const int n = op.n();
  const std::size_t un = static_cast<std::size_t>(n);
  std::vector<double> x = x0.empty() ? std::vector<double>(un, 0.0) : std::move(x0);
  const double bnorm = kernels::nrm2(b.data(), un);
  bump(c, 0, 1);
  if (bnorm == 0.0) {
    report.converged = true;
    report.final_resnorm = 0.0;
    return std::vector<double>(un, 0.0);
  }
  const double tol_abs = cfg.tol * bnorm;
  const std::int64_t matvecs_at_entry = op.matvec_count();

  std::vector<double> r(un), w(un);
  DenseMatrix V(n, cfg.m + 1), H(cfg.m + 1, cfg.m);
  std::vector<double> cs(cfg.m), sn(cfg.m), g(cfg.m + 1), h(cfg.m + 1);

  double last_cycle_res = -1.0;
  bool done = false;
  for (int cycle = 0; !done && cycle < cfg.max_cycles; ++cycle) {
    // r = b - A x
    op.apply(x.data(), r.data());
    for (std::size_t i = 0; i < un; ++i) r[i] = b[i] - r[i];
    bump(c, 1);
    double beta = kernels::nrm2(r.data(), un);
    bump(c, 0, 1);
    if (beta <= tol_abs) {
      report.converged = true;
      report.final_resnorm = beta / bnorm;
      break;
    }
    for (int i = 0; i < n; ++i) V(i, 0) = r[static_cast<std::size_t>(i)] / beta;
    bump(c, 1);
    std::fill(g.begin(), g.end(), 0.0);
    g[0] = beta;

    int j = 0;
    double res = beta;
    bool lucky = false;
    for (; j < cfg.m; ++j) {
      op.apply(V.col(j), w.data());
      double wnorm0 = kernels::nrm2(w.data(), un);
      bump(c, 0, 1);
      std::fill(h.begin(), h.end(), 0.0);
      cgs_pass(V, j + 1, w, h.data(), c);
      if (cfg.reorthogonalize) cgs_pass(V, j + 1, w, h.data(), c);
      double hnext = kernels::nrm2(w.data(), un);
      bump(c, 0, 1);
      // apply stored rotations, then the new one
      for (int i = 0; i < j; ++i) {
        double t = cs[i] * h[i] + sn[i] * h[i + 1];
        h[static_cast<std::size_t>(i + 1)] =
            -sn[i] * h[static_cast<std::size_t>(i)] + cs[i] * h[static_cast<std::size_t>(i + 1)];
        h[static_cast<std::size_t>(i)] = t;
      }
      double denom = std::hypot(h[static_cast<std::size_t>(j)], hnext);
      if (denom == 0.0) {
        cs[j] = 1.0;
        sn[j] = 0.0;
      } else {
        cs[j] = h[static_cast<std::size_t>(j)] / denom;
        sn[j] = hnext / denom;
      }
      h[static_cast<std::size_t>(j)] = denom;
      for (int i = 0; i <= j; ++i) H(i, j) = h[static_cast<std::size_t>(i)];
      double gj = g[static_cast<std::size_t>(j)];
      g[static_cast<std::size_t>(j)] = cs[j] * gj;
      g[static_cast<std::size_t>(j + 1)] = -sn[j] * gj;
      res = std::abs(g[static_cast<std::size_t>(j + 1)]);
      report.iterations += 1;

      lucky = hnext <= 1e-14 * wnorm0;
      if (lucky) {
        ++j;
        break;
      }
      for (int i = 0; i < n; ++i) V(i, j + 1) = w[static_cast<std::size_t>(i)] / hnext;
      bump(c, 1);
      if (res <= tol_abs) {
        ++j;
        break;
      }
      if (cfg.max_matvecs >= 0 && op.matvec_count() - matvecs_at_entry >= cfg.max_matvecs) {
        ++j;
        done = true;
        break;
      }
    }

    // back-substitute R y = g and update x
    std::vector<double> y(static_cast<std::size_t>(j));
    for (int i = j - 1; i >= 0; --i) {
      double s = g[static_cast<std::size_t>(i)];
      for (int k = i + 1; k < j; ++k) s -= H(i, k) * y[static_cast<std::size_t>(k)];
      if (H(i, i) == 0.0) throw SingularMatrixError("singular triangular factor in GMRES update");
      y[static_cast<std::size_t>(i)] = s / H(i, i);
    }
    for (int k = 0; k < j; ++k) kernels::axpy(y[static_cast<std::size_t>(k)], V.col(k), x.data(), un);
    bump(c, j);

    report.cycles += 1;
    CycleRecord rec;
    rec.cycle = report.cycles;
    rec.shortcut_resnorm = res / bnorm;
    rec.matvecs_cum = op.matvec_count() - matvecs_at_entry;
    if (cfg.verify) {
      op.apply(x.data(), w.data());
      double tn = 0;
      for (std::size_t i = 0; i < un; ++i) {
        double d = b[i] - w[i];
        tn += d * d;
      }
      rec.true_resnorm = std::sqrt(tn) / bnorm;
      report.final_true_resnorm = rec.true_resnorm;
      bump(c, 1, 1);
    }
    report.history.push_back(rec);
    report.final_resnorm = res / bnorm;

    if (res <= tol_abs || lucky) {
      report.converged = true;
      break;
    }
    if (cfg.max_matvecs >= 0 && op.matvec_count() - matvecs_at_entry >= cfg.max_matvecs) break;
    if (last_cycle_res >= 0 && std::abs(last_cycle_res - res) <= cfg.stagnation_tol * last_cycle_res) {
      report.stagnated = true;
      break;
    }
    last_cycle_res = res;
  }
  report.matvecs = op.matvec_count() - matvecs_at_entry;
  if (c) report.counters = *c;
  return x;
}

HarmonicRitzCheck harmonic_ritz_check(const RootPoly& poly, const LinearOperator& op,
                                      const std::vector<double>& b,
                                      const std::vector<int>& unit_indices, Counters* c) {
  const std::size_t n = static_cast<std::size_t>(op.n());
  const auto& units = poly.roots();
  HarmonicRitzCheck out;
  for (int j : unit_indices) {
    const Complex theta = units[static_cast<std::size_t>(j)].value;
    std::vector<Complex> w(n);
    for (std::size_t i = 0; i < n; ++i) w[i] = b[i];
    // ordered product over every root copy except one copy of theta itself
    bool skipped = false;
    auto apply_factor = [&](Complex th) {
      auto aw = op.apply_complex(w);
      for (std::size_t i = 0; i < n; ++i) w[i] -= aw[i] / th;
      bump(c, 2);
    };
    for (const auto& u : units) {
      for (int m = 0; m < u.multiplicity; ++m) {
        if (!skipped && u.value == theta) {
          skipped = true;  // the j-th root's own factor is omitted
        } else {
          apply_factor(u.value);
        }
        if (u.is_pair) apply_factor(std::conj(u.value));
      }
    }
    auto aw = op.apply_complex(w);
    double num = 0, den = 0;
    for (std::size_t i = 0; i < n; ++i) {
      num += std::norm(aw[i] - theta * w[i]);
      den += std::norm(w[i]);
    }
    bump(c, 1, 2);
    double wn = std::sqrt(den);
    double resid = wn > 0 ? std::sqrt(num) / wn : std::numeric_limits<double>::infinity();
    if (wn > 0)
      for (auto& z : w) z /= wn;
    out.unit_index.push_back(j);
    out.residual.push_back(resid);
    out.vectors.push_back(std::move(w));
  }
  return out;
}

}  // namespace ppk
