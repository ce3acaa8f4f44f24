#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "ppk/counters.hpp"
#include "ppk/linalg.hpp"
#include "ppk/operators.hpp"
#include "ppk/polynomial.hpp"

namespace ppk {

struct ArnoldiFactorization {
  DenseMatrix V;  // n x (steps+1) orthonormal basis
  DenseMatrix H;  // (steps+1) x steps upper Hessenberg
  double beta = 0;
  int steps = 0;
  bool breakdown = false;  // hit an invariant subspace (lucky breakdown)
};

// Arnoldi with classical Gram-Schmidt and an optional second pass.
ArnoldiFactorization arnoldi(const LinearOperator& op, const std::vector<double>& v0, int m,
                             bool reorthogonalize, Counters* c = nullptr);

// eigenvalues of H_mm (regular Ritz values)
std::vector<Complex> ritz_values(const ArnoldiFactorization& fac);

// eigenvalues of H_mm + h_{m+1,m}^2 f e_m^T with f = H_mm^{-T} e_m
// (harmonic Ritz values = roots of the GMRES residual polynomial)
std::vector<Complex> harmonic_ritz_values(const ArnoldiFactorization& fac);

struct CycleRecord {
  int cycle = 0;
  double shortcut_resnorm = -1;  // Givens estimate at cycle end
  double true_resnorm = -1;      // ||b - A x||, -1 when not computed
  std::int64_t matvecs_cum = 0;  // operator matvecs so far (preconditioned op)
};

struct SolveReport {
  int schema = 1;
  bool converged = false;
  bool stagnated = false;
  int cycles = 0;
  int iterations = 0;
  double final_resnorm = -1;       // shortcut estimate, relative to ||b||
  double final_true_resnorm = -1;  // relative, -1 when verify off
  std::int64_t matvecs = 0;        // true matvecs of the base operator
  Counters counters;
  std::vector<CycleRecord> history;
  std::uint64_t seed = 0;
  // driver-level fields
  int degree = 0;
  int added_copies = 0;
  int degree_retries = 0;
  std::string balance = "none";
  std::string notes;
  bool correction_applied = false;
  double correction_resnorm = -1;
};

struct GmresConfig {
  int m = 50;                      // restart length
  double tol = 1e-10;              // relative residual target
  int max_cycles = 100000;
  std::int64_t max_matvecs = -1;   // cap on op.matvec_count() growth, -1 = off
  bool reorthogonalize = false;
  bool verify = true;              // true residual at each restart
  double stagnation_tol = 1e-14;   // relative residual change per cycle
};

// restarted GMRES(m); x0 optional (empty = zero)
std::vector<double> restarted_gmres(const LinearOperator& op, const std::vector<double>& b,
                                    std::vector<double> x0, const GmresConfig& cfg,
                                    SolveReport& report, Counters* c = nullptr);

struct HarmonicRitzCheck {
  std::vector<int> unit_index;                // which root units were checked
  std::vector<double> residual;               // ||A y - theta y|| / ||y||
  std::vector<std::vector<Complex>> vectors;  // y_j, unit length
};

// y_j = prod_{i != j} (I - A/theta_i) b, evaluated by the ordered product in
// complex arithmetic; used both as an eigen-residual check and as the source
// of deflation vectors.
HarmonicRitzCheck harmonic_ritz_check(const RootPoly& poly, const LinearOperator& op,
                                      const std::vector<double>& b,
                                      const std::vector<int>& unit_indices,
                                      Counters* c = nullptr);

}  // namespace ppk
