#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "ppk/balance.hpp"
#include "ppk/krylov.hpp"
#include "ppk/operators.hpp"
#include "ppk/polynomial.hpp"
#include "ppk/rng.hpp"
#include "ppk/stability.hpp"

namespace ppk {

struct PPGmresConfig {
  int d = 50;
  int m = 50;
  double tol = 1e-10;
  std::int64_t max_mvp = 20'000'000;  // true matvec budget
  std::string balance = "none";       // none | b1 | b2 | b3 | b4 | b5
  bool stability_enabled = true;      // root-list polynomials only
  StabilityConfig stability;
  std::uint64_t seed = 12345;
  bool verify_true_residual = true;
  bool reorthogonalize_cycles = false;
  int max_cycles = 1000000;
  int degree_retries = 3;  // on DegreeTooHigh, shrink d by 10% and retry

  void validate() const;  // throws std::invalid_argument
};

struct PPGmresResult {
  std::vector<double> x;
  SolveReport report;
  CorrectionReport correction;
  PolyPtr poly;
  std::vector<Complex> roots;  // expanded root list for root-form polynomials
  SplineReport spline;         // definiteness diagnostic on the final polynomial
  PofReport pof_report;
};

// degree-d GMRES residual polynomial from one cycle on (op, v0): harmonic
// Ritz values of the Arnoldi factorization, Leja-ordered
RootPoly gmres_polynomial(const LinearOperator& op, const std::vector<double>& v0, int d,
                          Counters* c = nullptr);

PPGmresResult pp_gmres(const OperatorPtr& op, const std::vector<double>& b,
                       const PPGmresConfig& cfg);

struct EigenConfig {
  double sigma = 0;
  int nev = 10;
  int d = 50;
  int m = 80;
  int k = 40;
  double tol = 1e-8;
  std::string balance = "b1";  // none | b1 | b5
  int max_cycles = 500;
  std::uint64_t seed = 12345;
  bool harmonic_ritz = false;  // harmonic variant of the projected extraction

  void validate() const;
};

struct EigenResult {
  std::vector<Complex> values;    // Ritz values of A, sorted by |value - sigma|
  std::vector<double> residuals;  // ||A z - rho z|| / ||z||, matched to values
  int cycles = 0;
  std::int64_t matvecs = 0;
  bool converged = false;
  int degree = 0;
  std::uint64_t seed = 0;
  std::string warning;  // volatility note when values stray far from sigma
};

// polynomial-preconditioned thick-restarted Arnoldi for eigenvalues near sigma
EigenResult pp_arnoldi_interior(const OperatorPtr& op, const EigenConfig& cfg);

}  // namespace ppk
