#include "ppk/analysis.hpp"

#include <cmath>
#include <ostream>
#include <stdexcept>

namespace ppk {

void IntervalSpectrum::validate() const {
  if (!(u < v && v < 0 && 0 < a && a < b))
    throw std::invalid_argument("interval spectrum must satisfy u < v < 0 < a < b");
  if (!(b - a >= v - u))
    throw std::invalid_argument("interval spectrum: longer interval must be on the right");
}

CubicMap cubic_map(const IntervalSpectrum& spec) {
  spec.validate();
  CubicMap m;
  m.a = spec.a;
  m.b = spec.b;
  m.v = spec.v;
  double s1 = spec.a + spec.b + spec.v;
  double s2 = spec.a * spec.b + spec.a * spec.v + spec.b * spec.v;
  double disc = std::sqrt(s1 * s1 - 3.0 * s2) ;  // = sqrt(a^2+b^2+v^2 - (ab+av+bv))
  m.gamma1 = (s1 - disc) / 3.0;
  m.gamma2 = (s1 + disc) / 3.0;
  double pivot = s1 - 2.0 * m.gamma2;
  m.branch_u = spec.u <= pivot;
  m.marginal = std::abs(spec.u - pivot) < 1e-9 * std::abs(spec.u);
  m.xi = m.branch_u ? spec.u : m.gamma2;
  m.delta = m.f(0.0) - 1.0;
  if (!(m.delta > 0)) throw std::invalid_argument("invalid interval model: delta <= 0");
  return m;
}

double chebyshev_T(int m, double x) {
  if (m <= 0) return 1.0;
  double tm1 = 1.0, t = x;
  for (int k = 1; k < m; ++k) {
    double tn = 2.0 * x * t - tm1;
    tm1 = t;
    t = tn;
  }
  return t;
}

double chebyshev_logT(double nu, double x) {
  if (!(x > 1.0)) throw std::invalid_argument("chebyshev_logT requires x > 1");
  // T_nu(x) = cosh(nu acosh x); stable for tiny x-1 via log1p-based acosh
  double e = x - 1.0;
  double t = std::log1p(e + std::sqrt(e * (e + 2.0)));  // acosh(x)
  double nt = nu * t;
  return nt - std::log(2.0) + std::log1p(std::exp(-2.0 * nt));
}

ImprovementEstimate estimate_improvement(const IntervalSpectrum& spec, int d, int m) {
  if (d < 1 || m < 1) throw std::invalid_argument("estimate requires d, m >= 1");
  CubicMap map = cubic_map(spec);
  ImprovementEstimate est;
  est.delta = map.delta;
  est.branch_u = map.branch_u;
  est.marginal = map.marginal;

  double x = 1.0 + map.delta;
  double log_g = chebyshev_logT(m / 3.0, x);  // log T_{m/3}(1+delta)
  // inner stage: T_{d/3}(1+delta), then the outer T_m at that argument
  double t = std::acosh(x);
  double inner = std::cosh((d / 3.0) * t);
  double log_pp = inner > 1.0 ? chebyshev_logT(static_cast<double>(m), inner)
                              : 0.0;  // inner == 1 only when delta == 0 (excluded)

  est.per_cycle_gmres = std::exp(-log_g);
  est.per_cycle_ppgmres = std::exp(-log_pp);
  est.log10_gmres = log_g / std::log(10.0);
  est.log10_ppgmres = log_pp / std::log(10.0);
  // reduction per matvec: log_pp/(d*m) vs log_g/m
  est.speedup_matvecs = log_pp / (static_cast<double>(d) * log_g);
  return est;
}

FieldSamples sample_polynomial(const PrecPoly& poly, const GridSpec& grid) {
  FieldSamples s;
  const int nx = std::max(1, grid.re_n), ny = std::max(1, grid.im_n);
  s.x.reserve(static_cast<std::size_t>(nx) * ny);
  for (int j = 0; j < ny; ++j) {
    double y = ny == 1 ? grid.im_lo
                       : grid.im_lo + (grid.im_hi - grid.im_lo) * j / (ny - 1);
    for (int i = 0; i < nx; ++i) {
      double x = nx == 1 ? grid.re_lo
                         : grid.re_lo + (grid.re_hi - grid.re_lo) * i / (nx - 1);
      Complex phi = poly.phi_eval(Complex(x, y));
      s.x.push_back(x);
      s.y.push_back(y);
      s.re_phi.push_back(phi.real());
      s.im_phi.push_back(phi.imag());
    }
  }
  return s;
}

void write_field_csv(std::ostream& os, const FieldSamples& s) {
  os << "x,y,re_phi,im_phi\n";
  char buf[160];
  for (std::size_t i = 0; i < s.x.size(); ++i) {
    std::snprintf(buf, sizeof buf, "%.17g,%.17g,%.17g,%.17g\n", s.x[i], s.y[i], s.re_phi[i],
                  s.im_phi[i]);
    os << buf;
  }
}

}  // namespace ppk
