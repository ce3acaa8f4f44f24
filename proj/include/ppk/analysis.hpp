#pragma once

#include <iosfwd>
#include <vector>

#include "ppk/polynomial.hpp"

namespace ppk {

// two-interval indefinite spectrum model [u,v] u [a,b], u << v < 0 < a << b,
// longer interval on the right
struct IntervalSpectrum {
  double u = 0, v = 0, a = 0, b = 0;
  void validate() const;  // throws std::invalid_argument
};

// cubic h(x) = (x-a)(x-b)(x-v) rescaled so f = -2h/h(xi) + 1 maps the
// spectrum intervals into [-1, 1]
struct CubicMap {
  double gamma1 = 0, gamma2 = 0;  // critical points of h
  double xi = 0;                  // scaling point: u or gamma2
  bool branch_u = false;
  bool marginal = false;  // branch decision within 1e-9 relative
  double delta = 0;       // f(0) - 1 > 0
  double a = 0, b = 0, v = 0;

  double h(double x) const { return (x - a) * (x - b) * (x - v); }
  double f(double x) const { return -2.0 * h(x) / h(xi) + 1.0; }
};

CubicMap cubic_map(const IntervalSpectrum& spec);

// Chebyshev T_m by three-term recurrence (any real x, integer m >= 0)
double chebyshev_T(int m, double x);
// log T_nu(x) for x > 1 via the cosh closed form; nu may be fractional
double chebyshev_logT(double nu, double x);

struct ImprovementEstimate {
  double per_cycle_gmres = 0;    // residual factor per GMRES(m) cycle
  double per_cycle_ppgmres = 0;  // per preconditioned cycle
  double log10_gmres = 0;        // -log10 of the factors (reduction per cycle)
  double log10_ppgmres = 0;
  double speedup_matvecs = 0;    // matvec-normalized speedup, ~d asymptotically
  double delta = 0;
  bool branch_u = false;
  bool marginal = false;
};

// convergence model: GMRES(m) per-cycle factor 1/T_{m/3}(1+delta), degree-d
// preconditioned factor 1/T_m(T_{d/3}(1+delta)); fractional Chebyshev index
// handled in the cosh form
ImprovementEstimate estimate_improvement(const IntervalSpectrum& spec, int d, int m);

struct GridSpec {
  double re_lo = -1, re_hi = 1;
  int re_n = 1;
  double im_lo = 0, im_hi = 0;
  int im_n = 1;
};

struct FieldSamples {
  std::vector<double> x, y, re_phi, im_phi;  // row-major over the grid
};

FieldSamples sample_polynomial(const PrecPoly& poly, const GridSpec& grid);
void write_field_csv(std::ostream& os, const FieldSamples& s);  // x,y,re_phi,im_phi

}  // namespace ppk
