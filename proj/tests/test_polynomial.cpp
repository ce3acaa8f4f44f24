#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <algorithm>
#include <cmath>
#include <numeric>

#include "doctest.h"
#include "helpers.hpp"
#include "ppk/polynomial.hpp"
#include "ppk/rng.hpp"

using namespace ppk;
using testutil::pi_scalar;

namespace {

// exhaustive greedy Leja oracle over the expanded root list coordinates:
// start at max modulus, then repeatedly take the candidate maximizing the
// product of distances to the chosen prefix (in log magnitude)
std::vector<Complex> leja_oracle(std::vector<Complex> roots) {
  std::vector<Complex> out;
  std::size_t start = 0;
  for (std::size_t i = 1; i < roots.size(); ++i)
    if (std::abs(roots[i]) > std::abs(roots[start])) start = i;
  out.push_back(roots[start]);
  roots.erase(roots.begin() + static_cast<std::ptrdiff_t>(start));
  while (!roots.empty()) {
    std::size_t best = 0;
    double bestlog = -1e300;
    for (std::size_t i = 0; i < roots.size(); ++i) {
      double s = 0;
      for (Complex c : out) s += std::log(std::abs(roots[i] - c));
      if (s > bestlog + 1e-12) {
        bestlog = s;
        best = i;
      }
    }
    out.push_back(roots[best]);
    roots.erase(roots.begin() + static_cast<std::ptrdiff_t>(best));
  }
  return out;
}

double prefix_log_product(const std::vector<Complex>& order) {
  double s = 0;
  for (std::size_t i = 0; i < order.size(); ++i)
    for (std::size_t j = 0; j < i; ++j) s += std::log(std::abs(order[i] - order[j]));
  return s;
}

}  // namespace

TEST_CASE("leja order: trivial cases") {
  CHECK(leja_order({Complex(1, 0)}) == std::vector<Complex>{Complex(1, 0)});
  auto r = leja_order({Complex(1, 0), Complex(10, 0)});
  CHECK(r[0] == Complex(10, 0));
  CHECK(r[1] == Complex(1, 0));
}

TEST_CASE("leja order matches the greedy oracle's products; conjugates adjacent") {
  Rng rng(31, 0);
  for (int trial = 0; trial < 20; ++trial) {
    auto roots = testutil::random_roots(4, 2, rng);
    auto ours = leja_order(roots);
    REQUIRE(ours.size() == roots.size());
    // conjugate adjacency (positive-imaginary first)
    for (std::size_t i = 0; i < ours.size(); ++i)
      if (ours[i].imag() != 0) {
        REQUIRE(ours[i].imag() > 0);
        REQUIRE(i + 1 < ours.size());
        CHECK(ours[i + 1] == std::conj(ours[i]));
        ++i;
      }
    // same multiset
    CHECK(testutil::multiset_distance(ours, roots) == 0.0);
    // first element is a max-modulus root
    auto oracle = leja_oracle(roots);
    CHECK(std::abs(ours[0]) == doctest::Approx(std::abs(oracle[0])));
    (void)prefix_log_product;
    // greedy optimality at every real step: no unused candidate beats the
    // chosen one (pair steps are constrained to keep conjugates adjacent, so
    // only check positions that picked a real root)
    for (std::size_t k = 1; k < ours.size(); ++k) {
      if (ours[k].imag() != 0) continue;
      if (k > 0 && ours[k - 1].imag() > 0) continue;  // forced conjugate partner
      double chosen = 0;
      for (std::size_t j = 0; j < k; ++j) chosen += std::log(std::abs(ours[k] - ours[j]));
      for (std::size_t i = k + 1; i < ours.size(); ++i) {
        if (ours[i].imag() != 0) continue;  // pair candidates score differently
        double alt = 0;
        for (std::size_t j = 0; j < k; ++j) alt += std::log(std::abs(ours[i] - ours[j]));
        CHECK(chosen >= alt - 1e-9);
      }
    }
  }
}

TEST_CASE("from_roots enforces conjugate closure and nonzero roots") {
  CHECK_THROWS_AS((void)RootPoly::from_roots({Complex(1, 2)}), NumericalError);
  CHECK_THROWS_AS((void)RootPoly::from_roots({Complex(0, 0)}), NumericalError);
}

TEST_CASE("phi basics: phi(0)=0, phi'(0) = sum of reciprocals") {
  auto p1 = RootPoly::from_roots({Complex(1, 0), Complex(-1, 0)});
  CHECK(p1.phi_eval(0.0) == Complex(0, 0));
  CHECK(std::abs(p1.phi_deriv(0.0)) <= 1e-15);

  auto p2 = RootPoly::from_roots({Complex(-3, 0), Complex(-1, 0), Complex(2, 0), Complex(4, 0)});
  CHECK(p2.phi_deriv(0.0).real() == doctest::Approx(-7.0 / 12.0).epsilon(1e-14));

  Rng rng(32, 0);
  auto roots = testutil::random_roots(3, 2, rng);
  auto rp = RootPoly::from_roots(roots);
  Complex expect(0, 0);
  for (Complex t : roots) expect += 1.0 / t;
  CHECK(std::abs(rp.phi_deriv(0.0) - expect) <= 1e-12 * std::abs(expect));
  CHECK(std::abs(rp.phi_eval(0.0)) == 0.0);
}

TEST_CASE("phi_apply on a diagonal operator equals scalar phi elementwise") {
  Rng rng(33, 0);
  for (int trial = 0; trial < 10; ++trial) {
    auto roots = testutil::random_roots(5, 3, rng);
    auto poly = RootPoly::from_roots(roots);
    auto diag = rng.normal_vector(16);
    for (double& d : diag) d = 2.0 * d + (d >= 0 ? 1.0 : -1.0);  // keep away from roots
    auto op = diagonal_operator(diag);
    auto v = rng.normal_vector(16);
    auto y = poly.phi_apply(*op, v);
    for (std::size_t i = 0; i < 16; ++i) {
      double expect = poly.phi_eval(Complex(diag[i], 0)).real() * v[i];
      CHECK(std::abs(y[i] - expect) <= 1e-12 * (1.0 + std::abs(expect)));
    }
  }
}

TEST_CASE("phi_apply: single root at the eigenvalue gives the identity") {
  auto poly = RootPoly::from_roots({Complex(2, 0)});
  auto op = diagonal_operator({2, 2});
  auto y = poly.phi_apply(*op, {3.0, -4.0});
  CHECK(y[0] == doctest::Approx(3.0));
  CHECK(y[1] == doctest::Approx(-4.0));
}

TEST_CASE("phi_apply uses exactly degree matvecs; p_apply at most degree") {
  Rng rng(34, 0);
  auto roots = testutil::random_roots(4, 3, rng);
  auto poly = RootPoly::from_roots(roots);
  auto op = diagonal_operator(rng.normal_vector(8));
  auto v = rng.normal_vector(8);
  auto before = op->matvec_count();
  (void)poly.phi_apply(*op, v);
  CHECK(op->matvec_count() - before == poly.degree());
  before = op->matvec_count();
  (void)poly.p_apply(*op, v);
  CHECK(op->matvec_count() - before <= poly.degree());
  CHECK(op->matvec_count() - before >= poly.degree() - 1);
}

TEST_CASE("p_apply closed forms for degree 1 and 2") {
  {
    auto poly = RootPoly::from_roots({Complex(4, 0)});
    auto op = diagonal_operator({3, 5});
    auto y = poly.p_apply(*op, {1.0, 2.0});
    CHECK(y[0] == doctest::Approx(0.25));
    CHECK(y[1] == doctest::Approx(0.5));
  }
  {
    double t1 = 2, t2 = -5;
    auto poly = RootPoly::from_roots({Complex(t1, 0), Complex(t2, 0)});
    std::vector<double> diag{1.5, -2.5, 4.0};
    auto op = diagonal_operator(diag);
    auto y = poly.p_apply(*op, {1.0, 1.0, 1.0});
    for (std::size_t i = 0; i < 3; ++i) {
      double z = diag[i];
      double expect = 1.0 / t1 + 1.0 / t2 - z / (t1 * t2);
      CHECK(y[i] == doctest::Approx(expect).epsilon(1e-13));
    }
  }
}

TEST_CASE("identity relation A p(A) v = phi(A) v") {
  Rng rng(35, 0);
  for (int trial = 0; trial < 10; ++trial) {
    auto roots = testutil::random_roots(6, 4, rng);
    auto poly = RootPoly::from_roots(roots);
    DenseMatrix M = testutil::random_dense(12, rng);
    auto op = testutil::dense_operator(M);
    auto v = rng.normal_vector(12);
    auto pv = poly.p_apply(*op, v);
    auto apv = op->apply(pv);
    auto fv = poly.phi_apply(*op, v);
    double err = 0, vn = 0;
    for (std::size_t i = 0; i < 12; ++i) {
      err += (apv[i] - fv[i]) * (apv[i] - fv[i]);
      vn += v[i] * v[i];
    }
    CHECK(std::sqrt(err) <= 1e-10 * std::sqrt(vn) * (1.0 + std::abs(poly.phi_eval(2.0))));
  }
}

TEST_CASE("phi_apply is invariant under reordering on well-conditioned roots") {
  Rng rng(36, 0);
  auto roots = testutil::random_roots(4, 2, rng, 1.0, 4.0);
  auto a = RootPoly::from_roots(roots);
  std::reverse(roots.begin(), roots.end());
  // bypass Leja by constructing units manually in reversed order
  std::vector<PolyRoot> units;
  for (std::size_t i = 0; i < roots.size(); ++i) {
    if (roots[i].imag() != 0) {
      Complex up(roots[i].real(), std::abs(roots[i].imag()));
      units.push_back({up, 1, true, RootTag::Gmres});
      ++i;  // partner
    } else {
      units.push_back({roots[i], 1, false, RootTag::Gmres});
    }
  }
  RootPoly b(units);
  auto op = diagonal_operator({0.5, -1.0, 2.0, 3.5, -2.5});
  auto v = std::vector<double>{1, 2, 3, 4, 5};
  auto ya = a.phi_apply(*op, v);
  auto yb = b.phi_apply(*op, v);
  for (std::size_t i = 0; i < ya.size(); ++i)
    CHECK(std::abs(ya[i] - yb[i]) <= 1e-8 * (1.0 + std::abs(ya[i])));
}

TEST_CASE("pof closed forms and reorder invariance") {
  {
    auto poly = RootPoly::from_roots({Complex(1, 0), Complex(2, 0)});
    auto rep = pof(poly);
    // pof(1) = |1 - 1/2| = 1/2, pof(2) = |1 - 2/1| = 1
    double p1 = -1, p2 = -1;
    for (const auto& e : rep.entries) {
      if (e.root == Complex(1, 0)) p1 = std::pow(10.0, e.log10_pof);
      if (e.root == Complex(2, 0)) p2 = std::pow(10.0, e.log10_pof);
    }
    CHECK(p1 == doctest::Approx(0.5));
    CHECK(p2 == doctest::Approx(1.0));
  }
  {
    // pof(3) over {1, 2, 3} = |1 - 3/1| * |1 - 3/2| = 2 * 1/2 = 1
    auto poly = RootPoly::from_roots({Complex(1, 0), Complex(2, 0), Complex(3, 0)});
    auto rep = pof(poly);
    for (const auto& e : rep.entries)
      if (e.root == Complex(3, 0)) CHECK(std::pow(10.0, e.log10_pof) == doctest::Approx(1.0));
  }
  Rng rng(37, 0);
  auto roots = testutil::random_roots(5, 2, rng);
  auto a = pof(RootPoly::from_roots(roots));
  std::vector<Complex> shuffled = roots;
  std::rotate(shuffled.begin(), shuffled.begin() + 3, shuffled.end());
  auto b = pof(RootPoly::from_roots(shuffled));
  for (const auto& ea : a.entries) {
    bool found = false;
    for (const auto& eb : b.entries)
      if (std::abs(ea.root - eb.root) < 1e-14) {
        CHECK(ea.log10_pof == doctest::Approx(eb.log10_pof).epsilon(1e-10));
        found = true;
      }
    CHECK(found);
  }
}

TEST_CASE("pof of a multiplied root is -inf; coincident distinct roots flagged") {
  std::vector<PolyRoot> units{{Complex(2, 0), 2, false, RootTag::Gmres},
                              {Complex(5, 0), 1, false, RootTag::Gmres}};
  auto rep = pof(RootPoly(units));
  for (const auto& e : rep.entries)
    if (e.root == Complex(2, 0)) CHECK(std::isinf(e.log10_pof));

  std::vector<PolyRoot> dup{{Complex(2, 0), 1, false, RootTag::Gmres},
                            {Complex(2, 0), 1, false, RootTag::Gmres}};
  auto rep2 = pof(RootPoly(dup));
  bool any_coincident = false;
  for (const auto& e : rep2.entries) any_coincident = any_coincident || e.coincident;
  CHECK(any_coincident);
}

TEST_CASE("add_root_copies ceiling formula") {
  // construct roots whose pof we can place relative to a cutoff exactly
  auto poly = RootPoly::from_roots({Complex(1, 0), Complex(2, 0), Complex(3, 0)});
  auto rep = pof(poly);
  auto all = [](const PofEntry&) { return true; };

  // cutoff above every pof: unchanged
  auto same = add_root_copies(poly, rep, 10.0, all);
  CHECK(same.degree() == poly.degree());

  // log10 pof(3) = log10(3); cutoff = log10(3) - 1 -> exactly 1 extra copy
  double lp3 = std::log10(3.0);
  auto one = add_root_copies(poly, rep, lp3 - 1.0, [](const PofEntry& e) {
    return e.root == Complex(3, 0);
  });
  CHECK(one.degree() == poly.degree() + 1);

  // cutoff = log10 pof - 15 -> ceil(15/14) = 2 extra copies
  auto two = add_root_copies(poly, rep, lp3 - 15.0, [](const PofEntry& e) {
    return e.root == Complex(3, 0);
  });
  CHECK(two.degree() == poly.degree() + 2);
}

TEST_CASE("conjugate pairs are augmented together") {
  auto poly = RootPoly::from_roots({Complex(1, 2), Complex(1, -2), Complex(30, 0)});
  auto rep = pof(poly);
  auto aug = add_root_copies(poly, rep, -10.0, [](const PofEntry& e) { return e.is_pair; });
  int pair_mult = 0;
  for (const auto& u : aug.roots())
    if (u.is_pair) pair_mult = u.multiplicity;
  CHECK(pair_mult >= 2);
  CHECK(aug.degree() >= poly.degree() + 2);  // a pair copy adds 2 to the degree
}

TEST_CASE("spectrum_image trivial and scalar cases") {
  auto poly = RootPoly::from_roots({Complex(2, 0)});
  auto img = spectrum_image(poly, {Complex(2, 0), Complex(4, 0)});
  CHECK(img[0].real() == doctest::Approx(1.0));  // phi(z) = z/2
  CHECK(img[1].real() == doctest::Approx(2.0));
}

TEST_CASE("real operator with conjugate-closed roots keeps output real-consistent") {
  // scalar phi at real points has zero imaginary part to roundoff
  Rng rng(38, 0);
  auto roots = testutil::random_roots(2, 3, rng);
  auto poly = RootPoly::from_roots(roots);
  for (int i = 0; i < 50; ++i) {
    Complex v = poly.phi_eval(Complex(4.0 * rng.normal(), 0));
    CHECK(std::abs(v.imag()) <= 1e-13 * (1.0 + std::abs(v.real())));
  }
}

TEST_CASE("with_appended and with_removed bookkeeping") {
  auto poly = RootPoly::from_roots({Complex(1, 0), Complex(5, 0)});
  auto grown = poly.with_appended(Complex(-2, 0), RootTag::Balance);
  CHECK(grown.degree() == 3);
  bool tagged = false;
  std::size_t idx = 0;
  for (std::size_t i = 0; i < grown.roots().size(); ++i)
    if (grown.roots()[i].tag == RootTag::Balance) {
      tagged = true;
      idx = i;
    }
  CHECK(tagged);
  auto shrunk = grown.with_removed(idx);
  CHECK(shrunk.degree() == 2);
}
