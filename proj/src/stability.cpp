#include "ppk/stability.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "ppk/kernels.hpp"

namespace ppk {

SideClassification classify_sides(PofReport& rep, const StabilityConfig& cfg,
                                  const std::optional<std::vector<Complex>>& ritz) {
  SideClassification out;
  for (auto& e : rep.entries) {
    e.side = e.root.real() > 0 ? 1 : (e.root.real() < 0 ? -1 : 0);
    if (e.tag == RootTag::Balance) continue;  // not a harmonic Ritz value
    e.spurious = e.log10_pof > cfg.pofcutoff_log10 && e.residual_norm >= 0 &&
                 e.residual_norm > cfg.rncutoff;
  }
  double best_pos = 0, best_neg = 0;
  if (ritz) {
    for (Complex z : *ritz) {
      if (z.real() > 0) best_pos = std::max(best_pos, std::abs(z.real()));
      if (z.real() < 0) best_neg = std::max(best_neg, std::abs(z.real()));
    }
  } else {
    for (const auto& e : rep.entries) {
      if (e.spurious || e.tag == RootTag::Balance) continue;
      if (e.side > 0) best_pos = std::max(best_pos, std::abs(e.root.real()));
      if (e.side < 0) best_neg = std::max(best_neg, std::abs(e.root.real()));
    }
  }
  if (best_pos == 0 || best_neg == 0) {
    out.degenerate = true;
    out.larger_side = best_pos > 0 ? 1 : (best_neg > 0 ? -1 : 0);
  } else {
    out.larger_side = best_pos >= best_neg ? 1 : -1;
  }
  rep.larger_side = out.larger_side;
  return out;
}

StabilizeResult stabilize_indefinite(const RootPoly& poly, const LinearOperator& op,
                                     const std::vector<double>& b, const StabilityConfig& cfg,
                                     Counters* c) {
  StabilizeResult res{poly, pof(poly), {}, 0, 0, 0, ""};

  // step 0: residuals for every root over the cutoff, then sides + spurious
  std::vector<int> candidates;
  for (std::size_t j = 0; j < res.report.entries.size(); ++j) {
    const auto& e = res.report.entries[j];
    if (e.tag != RootTag::Balance && std::isfinite(e.log10_pof) &&
        e.log10_pof > cfg.pofcutoff_log10)
      candidates.push_back(static_cast<int>(j));
  }
  HarmonicRitzCheck check;
  if (!candidates.empty()) check = harmonic_ritz_check(poly, op, b, candidates, c);
  for (std::size_t i = 0; i < check.unit_index.size(); ++i)
    res.report.entries[static_cast<std::size_t>(check.unit_index[i])].residual_norm =
        check.residual[i];

  SideClassification sides = classify_sides(res.report, cfg);
  res.larger_side = sides.larger_side;
  for (const auto& e : res.report.entries)
    if (e.spurious) ++res.spurious_count;

  auto small_side = [&](const PofEntry& e) {
    return !sides.degenerate && e.side != 0 && e.side != sides.larger_side;
  };
  auto augmentable = [&](const PofEntry& e) {
    return e.tag != RootTag::Balance && !e.spurious && std::isfinite(e.log10_pof);
  };

  // deflation candidates: small-side accurate high-pof roots (those are the
  // ones whose residual bound scales with pof), largest pof first
  for (std::size_t i = 0; i < check.unit_index.size(); ++i) {
    const auto& e = res.report.entries[static_cast<std::size_t>(check.unit_index[i])];
    if (e.spurious || !small_side(e)) continue;
    HarmonicRitzInfo info;
    info.root = e.root;
    info.log10_pof = e.log10_pof;
    info.residual = check.residual[i];
    info.is_pair = e.is_pair;
    info.vector = check.vectors[i];
    res.deflation_candidates.push_back(std::move(info));
  }
  std::sort(res.deflation_candidates.begin(), res.deflation_candidates.end(),
            [](const auto& a, const auto& b2) { return a.log10_pof > b2.log10_pof; });

  // step 1 (optional): one extra copy for up to `limit` extreme small-side
  // accurate roots, then recompute pofs
  RootPoly cur = poly;
  PofReport cur_rep = res.report;
  if (cfg.optional_step1_enabled && cfg.augment_enabled) {
    std::vector<std::size_t> extreme;
    for (std::size_t j = 0; j < cur_rep.entries.size(); ++j) {
      const auto& e = cur_rep.entries[j];
      if (small_side(e) && augmentable(e) && e.log10_pof > cfg.step1_pof_threshold_log10)
        extreme.push_back(j);
    }
    std::sort(extreme.begin(), extreme.end(), [&](std::size_t a, std::size_t b2) {
      return cur_rep.entries[a].log10_pof > cur_rep.entries[b2].log10_pof;
    });
    if (extreme.size() > static_cast<std::size_t>(cfg.step1_limit))
      extreme.resize(static_cast<std::size_t>(cfg.step1_limit));
    if (!extreme.empty()) {
      auto units = cur.roots();
      for (std::size_t j : extreme) {
        units[j].multiplicity += 1;
        units[j].tag = RootTag::Stability;
        res.added_copies += 1;
      }
      cur = RootPoly(std::move(units));
      // recompute, carrying sides/spurious/residuals over by unit position
      PofReport fresh = pof(cur);
      for (std::size_t j = 0; j < fresh.entries.size(); ++j) {
        fresh.entries[j].side = cur_rep.entries[j].side;
        fresh.entries[j].spurious = cur_rep.entries[j].spurious;
        fresh.entries[j].residual_norm = cur_rep.entries[j].residual_norm;
      }
      fresh.larger_side = cur_rep.larger_side;
      cur_rep = std::move(fresh);
      res.notes += "step1: " + std::to_string(extreme.size()) + " small-side copies; ";
    }
  }

  if (cfg.augment_enabled) {
    // step 2: an accurate small-side root whose pof is still astronomical
    // means the degree itself is too high
    for (const auto& e : cur_rep.entries) {
      if (small_side(e) && augmentable(e) && e.log10_pof > cfg.small_side_pof_abort_log10)
        throw DegreeTooHigh(e.log10_pof, e.root);
    }

    // step 3: standard augmentation on the larger side
    int degree_before = cur.degree();
    cur = add_root_copies(cur, cur_rep, cfg.pofcutoff_log10, [&](const PofEntry& e) {
      return augmentable(e) && (sides.degenerate || e.side == sides.larger_side);
    });
    res.added_copies += cur.degree() - degree_before;  // counts pair copies as 2
  }

  res.poly = std::move(cur);
  return res;
}

std::vector<double> galerkin_deflation(const LinearOperator& op, const std::vector<double>& x,
                                       const std::vector<double>& b,
                                       const std::vector<std::vector<double>>& y, bool* skipped,
                                       Counters* c) {
  if (skipped) *skipped = false;
  if (y.empty()) return x;
  const std::size_t n = static_cast<std::size_t>(op.n());
  const int k = static_cast<int>(y.size());

  std::vector<double> r(n);
  op.apply(x.data(), r.data());
  for (std::size_t i = 0; i < n; ++i) r[i] = b[i] - r[i];
  if (c) c->vecops += 1;

  DenseMatrix G(k, k);
  std::vector<double> rhs(static_cast<std::size_t>(k));
  std::vector<double> ay(n);
  for (int j = 0; j < k; ++j) {
    op.apply(y[static_cast<std::size_t>(j)].data(), ay.data());
    for (int i = 0; i < k; ++i)
      G(i, j) = kernels::dot(y[static_cast<std::size_t>(i)].data(), ay.data(), n);
    rhs[static_cast<std::size_t>(j)] = kernels::dot(y[static_cast<std::size_t>(j)].data(), r.data(), n);
    if (c) c->dots += k + 1;
  }
  std::vector<double> g;
  try {
    g = solve_dense(G, rhs);
  } catch (const SingularMatrixError&) {
    if (skipped) *skipped = true;
    return x;
  }
  std::vector<double> out = x;
  for (int j = 0; j < k; ++j)
    kernels::axpy(g[static_cast<std::size_t>(j)], y[static_cast<std::size_t>(j)].data(),
                  out.data(), n);
  if (c) c->vecops += k;
  return out;
}

std::vector<double> gmres_correction(const LinearOperator& op, std::vector<double> x,
                                     const std::vector<double>& b, int k, Counters* c) {
  if (k <= 0) return x;
  GmresConfig cfg;
  cfg.m = k;
  cfg.max_cycles = 1;
  cfg.tol = 1e-300;  // run the full k iterations unless a lucky breakdown hits
  cfg.verify = false;
  cfg.reorthogonalize = true;
  SolveReport rep;
  return restarted_gmres(op, b, std::move(x), cfg, rep, c);
}

std::vector<std::vector<double>> realize_deflation_basis(
    const std::vector<HarmonicRitzInfo>& candidates, int max_vectors) {
  std::vector<std::vector<double>> out;
  for (const auto& cnd : candidates) {
    if (static_cast<int>(out.size()) >= max_vectors) break;
    const std::size_t n = cnd.vector.size();
    std::vector<double> re(n);
    for (std::size_t i = 0; i < n; ++i) re[i] = cnd.vector[i].real();
    double nr = kernels::nrm2(re.data(), n);
    if (nr > 0) {
      for (auto& v : re) v /= nr;
      out.push_back(std::move(re));
    }
    if (cnd.is_pair && static_cast<int>(out.size()) < max_vectors) {
      std::vector<double> im(n);
      for (std::size_t i = 0; i < n; ++i) im[i] = cnd.vector[i].imag();
      double ni = kernels::nrm2(im.data(), n);
      if (ni > 1e-14) {
        for (auto& v : im) v /= ni;
        out.push_back(std::move(im));
      }
    }
  }
  return out;
}

}  // namespace ppk
