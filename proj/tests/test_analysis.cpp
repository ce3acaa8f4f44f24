#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>
#include <sstream>

#include "doctest.h"
#include "helpers.hpp"
#include "ppk/analysis.hpp"
#include "ppk/rng.hpp"

using namespace ppk;

TEST_CASE("interval spectrum validation") {
  IntervalSpectrum bad{-1, -2, 1, 4};  // u > v violates ordering
  CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
  IntervalSpectrum wrong_side{-100, -1, 1, 50};  // right interval shorter
  CHECK_THROWS_AS(wrong_side.validate(), std::invalid_argument);
  IntervalSpectrum ok{-100, -1, 1, 4900};
  CHECK_NOTHROW(ok.validate());
}

TEST_CASE("cubic map: critical points, normalization, and delta") {
  IntervalSpectrum spec{-100, -1, 1, 4900};
  auto map = cubic_map(spec);
  // gamma1 < gamma2 are the critical points of h' (quadratic roots)
  CHECK(map.gamma1 < map.gamma2);
  double h = 1e-5;
  for (double g : {map.gamma1, map.gamma2}) {
    double d = (map.h(g + h) - map.h(g - h)) / (2 * h);
    CHECK(std::abs(d) <= 1e-3 * std::max(1.0, std::abs(map.h(g)) / std::abs(g)));
  }
  // f maps the defining points to 1 or -1
  CHECK(map.f(spec.a) == doctest::Approx(1.0));
  CHECK(map.f(spec.b) == doctest::Approx(1.0));
  CHECK(map.f(spec.v) == doctest::Approx(1.0));
  CHECK(map.f(map.xi) == doctest::Approx(-1.0));
  // delta = f(0) - 1 > 0
  CHECK(map.delta == doctest::Approx(map.f(0.0) - 1.0));
  CHECK(map.delta > 0);
}

TEST_CASE("cubic map keeps |f| <= 1 on the spectrum intervals for random tuples") {
  Rng rng(80, 0);
  for (int trial = 0; trial < 100; ++trial) {
    double a = 0.2 + 2.0 * rng.uniform();
    double b = a + 50.0 + 5000.0 * rng.uniform();
    double v = -(0.2 + 2.0 * rng.uniform());
    double span = (b - a) * rng.uniform();  // left interval strictly shorter
    double u = v - std::min(span, 0.98 * (b - a));
    IntervalSpectrum spec{u, v, a, b};
    spec.validate();
    auto map = cubic_map(spec);
    for (int k = 0; k <= 200; ++k) {
      double xr = a + (b - a) * k / 200.0;
      CHECK(std::abs(map.f(xr)) <= 1.0 + 1e-9);
      double xl = u + (v - u) * k / 200.0;
      CHECK(std::abs(map.f(xl)) <= 1.0 + 1e-9);
    }
  }
}

TEST_CASE("chebyshev_T: recurrence identities and trig closed form") {
  CHECK(chebyshev_T(0, 0.37) == 1.0);
  CHECK(chebyshev_T(1, 0.37) == 0.37);
  Rng rng(81, 0);
  for (int trial = 0; trial < 50; ++trial) {
    double x = 2.0 * rng.uniform() - 1.0;
    int m = 2 + static_cast<int>(rng.uniform() * 30);
    CHECK(chebyshev_T(m, x) == doctest::Approx(std::cos(m * std::acos(x))).epsilon(1e-9));
    // recurrence consistency
    CHECK(chebyshev_T(m, x) ==
          doctest::Approx(2 * x * chebyshev_T(m - 1, x) - chebyshev_T(m - 2, x)).epsilon(1e-9));
  }
}

TEST_CASE("chebyshev_logT matches log of the recurrence for moderate arguments") {
  for (double x : {1.001, 1.5, 3.0}) {
    for (int m : {1, 5, 20}) {
      CHECK(chebyshev_logT(m, x) ==
            doctest::Approx(std::log(chebyshev_T(m, x))).epsilon(1e-10));
    }
  }
}

TEST_CASE("T_m(1 + delta) ~ 1 + m^2 delta for tiny delta") {
  for (double delta : {1e-8, 1e-9, 1e-10}) {
    for (int m : {3, 10, 50, 100}) {
      double t = chebyshev_T(m, 1.0 + delta);
      double approx = 1.0 + m * m * delta;
      CHECK(std::abs(t - approx) <= 1e-3 * approx);
    }
  }
}

TEST_CASE("estimate_improvement: speedup grows toward d; factors consistent") {
  IntervalSpectrum spec{-100, -1, 1, 4900};
  auto e27 = estimate_improvement(spec, 27, 50);
  auto e51 = estimate_improvement(spec, 51, 50);
  CHECK(e27.speedup_matvecs > 1.0);
  CHECK(e51.speedup_matvecs > e27.speedup_matvecs);
  CHECK(e51.speedup_matvecs < 51.0 * 1.5);
  // per-cycle factors are in (0, 1) and log10 fields agree with them
  for (const auto& e : {e27, e51}) {
    CHECK(e.per_cycle_gmres > 0);
    CHECK(e.per_cycle_gmres < 1);
    CHECK(e.per_cycle_ppgmres < e.per_cycle_gmres);
    CHECK(e.log10_gmres == doctest::Approx(-std::log10(e.per_cycle_gmres)).epsilon(1e-9));
  }
}

TEST_CASE("sample_polynomial: grid layout and values") {
  auto poly = RootPoly::from_roots({Complex(2, 0)});
  GridSpec grid;
  grid.re_lo = 0;
  grid.re_hi = 2;
  grid.re_n = 3;
  grid.im_lo = 0;
  grid.im_hi = 1;
  grid.im_n = 2;
  auto s = sample_polynomial(poly, grid);
  REQUIRE(s.x.size() == 6);
  // phi(z) = z/2
  for (std::size_t i = 0; i < s.x.size(); ++i) {
    CHECK(s.re_phi[i] == doctest::Approx(s.x[i] / 2.0));
    CHECK(s.im_phi[i] == doctest::Approx(s.y[i] / 2.0));
  }
  // CSV header
  std::ostringstream os;
  write_field_csv(os, s);
  CHECK(os.str().rfind("x,y,re_phi,im_phi\n", 0) == 0);
}

TEST_CASE("single-point grid degenerates cleanly") {
  auto poly = RootPoly::from_roots({Complex(1, 0)});
  GridSpec grid;
  grid.re_lo = grid.re_hi = 3.0;
  grid.re_n = 1;
  auto s = sample_polynomial(poly, grid);
  REQUIRE(s.x.size() == 1);
  CHECK(s.x[0] == 3.0);
  CHECK(s.re_phi[0] == doctest::Approx(3.0));
}
