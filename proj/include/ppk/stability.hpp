#pragma once

#include <optional>
#include <string>
#include <vector>

#include "ppk/krylov.hpp"
#include "ppk/polynomial.hpp"

namespace ppk {

struct StabilityConfig {
  double pofcutoff_log10 = 4;            // augmentation threshold
  double rncutoff = 1e-3;                // spurious-root residual cutoff
  double small_side_pof_abort_log10 = 20;
  bool optional_step1_enabled = true;    // limited small-side augmentation
  double step1_pof_threshold_log10 = 14;
  int step1_limit = 3;                   // at most this many roots, one copy each
  int max_deflation_vectors = 8;
  int gmres_correction_iters = 10;
  // false: classify and collect deflation candidates but add no root copies
  // (correction-phase alternative to augmentation)
  bool augment_enabled = true;
};

// step-2 signal: the requested degree produces an untreatable small-side root
struct DegreeTooHigh : NumericalError {
  DegreeTooHigh(double lp, Complex r)
      : NumericalError("small-side pof too large; reduce polynomial degree"),
        log10_pof(lp),
        root(r) {}
  double log10_pof;
  Complex root;
};

struct SideClassification {
  int larger_side = 0;     // +1 / -1, 0 when degenerate
  bool degenerate = false; // all roots on one side
};

// Fills side and spurious flags in-place (residuals must already be set on
// entries above the pof cutoff); larger side from non-spurious roots'
// max |Re|, or from `ritz` when supplied.
SideClassification classify_sides(PofReport& rep, const StabilityConfig& cfg,
                                  const std::optional<std::vector<Complex>>& ritz = std::nullopt);

struct HarmonicRitzInfo {
  Complex root;
  double log10_pof = 0;
  double residual = 0;
  bool is_pair = false;
  std::vector<Complex> vector;  // unit-norm product-form eigenvector estimate
};

struct StabilizeResult {
  RootPoly poly;
  PofReport report;  // pof of the input polynomial, sides/spurious filled
  std::vector<HarmonicRitzInfo> deflation_candidates;  // small-side accurate roots
  int added_copies = 0;
  int larger_side = 0;
  int spurious_count = 0;
  std::string notes;
};

// Steps 0-3 of the indefinite stability control: classify sides and spurious
// roots, optionally give extreme small-side accurate roots one extra copy,
// abort (DegreeTooHigh) when a small-side accurate root still has
// log10 pof > abort threshold, then augment the larger side.  Balancing roots
// are exempt throughout.
StabilizeResult stabilize_indefinite(const RootPoly& poly, const LinearOperator& op,
                                     const std::vector<double>& b, const StabilityConfig& cfg,
                                     Counters* c = nullptr);

struct CorrectionReport {
  double resnorm_before = -1;
  double resnorm_after_deflation = -1;
  double resnorm_after_gmres = -1;
  int deflation_vectors = 0;
  int spurious_roots = 0;
  bool deflation_skipped = false;  // singular projected system
};

// Galerkin projection over the (real/imaginary parts of the) supplied
// vectors: x' = x + Y g with (Y^T A Y) g = Y^T (b - A x).
std::vector<double> galerkin_deflation(const LinearOperator& op, const std::vector<double>& x,
                                       const std::vector<double>& b,
                                       const std::vector<std::vector<double>>& y,
                                       bool* skipped = nullptr, Counters* c = nullptr);

// k plain GMRES iterations started from x (single cycle, no restart)
std::vector<double> gmres_correction(const LinearOperator& op, std::vector<double> x,
                                     const std::vector<double>& b, int k, Counters* c = nullptr);

// expand complex product-form vectors into independent real columns
std::vector<std::vector<double>> realize_deflation_basis(
    const std::vector<HarmonicRitzInfo>& candidates, int max_vectors);

}  // namespace ppk
