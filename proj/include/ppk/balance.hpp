#pragma once

#include <string>
#include <vector>

#include "ppk/krylov.hpp"
#include "ppk/polynomial.hpp"

namespace ppk {

// Spectrum-balancing strategies for indefinite problems.  Each produces a
// polynomial with phi'(0) = 0 (or reports why it left the input unchanged),
// so that phi maps both ends of the spectrum away from the origin instead of
// folding one side onto the other.

struct BalanceOutcome {
  PolyPtr poly;
  bool changed = false;
  std::string note;
  double phi_deriv0_before = 0;
  double phi_deriv0_after = 0;
  bool ill_conditioned = false;  // b3/b4 Gram-matrix warning
  double gram_condition = -1;
};

// b1: append the single root eta = -1 / phi'(0) that zeroes the derivative
BalanceOutcome balance1(const RootPoly& poly);

// b2: swap out the existing root whose derivative contribution best matches
// phi'(0), then append the exact compensator; falls back to b1
BalanceOutcome balance2(const RootPoly& poly);

// b5: endpoint ratio beta = pi(a)/pi(-a) places eta = a(beta+1)/(beta-1)
BalanceOutcome balance5(const RootPoly& poly, double a);

// b3: minimum-residual polynomial over the Krylov space seeded with A*b
// (Newton basis on Leja-ordered Ritz values); phi(0) = phi'(0) = 0 by
// construction.  degree of phi is d+1.
BalanceOutcome balance3(const LinearOperator& op, const std::vector<double>& b, int d,
                        Counters* c = nullptr);

// b4: composite phi_out(phi_in(z)) with a b3 inner polynomial and a GMRES
// outer polynomial built on phi_in(A)
BalanceOutcome balance4(const LinearOperator& op, const std::vector<double>& b, int d_inner,
                        int d_outer, Counters* c = nullptr);

BalanceOutcome apply_balance(const std::string& method, const RootPoly& poly,
                             const LinearOperator& op, const std::vector<double>& b,
                             Counters* c = nullptr);

// Cubic-spline definiteness check on the intervals between adjacent real
// roots: models |pi| by the Hermite cubic C_j built from pi' at the interval
// ends and flags intervals whose interior maximum exceeds 1 unless Ritz
// values indicate eigenvalues actually live there.
struct SplineInterval {
  double left = 0, right = 0;   // root abscissae
  double critical = 0;          // interior critical point of C_j
  double value = 0;             // C_j at the critical point
  bool flagged = false;
};

struct SplineReport {
  bool applicable = false;  // at least one qualifying interval existed
  bool pass = true;         // no interval flagged
  std::vector<SplineInterval> intervals;
};

SplineReport spline_definiteness_test(const RootPoly& poly, const std::vector<Complex>& ritz);

}  // namespace ppk
