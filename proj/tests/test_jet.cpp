#include <doctest.h>

#include <cmath>

#include "pem/jet.hpp"
#include "pem/linalg.hpp"

using namespace pem;

TEST_CASE("jet partial derivatives match closed forms") {
  const JetSpace& sp = JetSpace::get(2, 4);
  Jet x = Jet::variable(sp, 0, 1.2);
  Jet y = Jet::variable(sp, 1, -0.4);
  Jet f = x * x * y + recip(2.0 + y) + sinh(x) * 0.5;

  CHECK(f.value() == doctest::Approx(1.2 * 1.2 * (-0.4) + 1.0 / 1.6 +
                                     0.5 * std::sinh(1.2)).epsilon(1e-14));
  std::uint8_t dxxy[2] = {2, 1};
  CHECK(f.partial(sp.index_of({dxxy, 2})) == doctest::Approx(2.0).epsilon(1e-14));
  std::uint8_t dyyy[2] = {0, 3};
  CHECK(f.partial(sp.index_of({dyyy, 2})) ==
        doctest::Approx(-6.0 / std::pow(1.6, 4)).epsilon(1e-13));
  std::uint8_t dx4[2] = {4, 0};
  CHECK(f.partial(sp.index_of({dx4, 2})) ==
        doctest::Approx(0.5 * std::sinh(1.2)).epsilon(1e-13));
}

TEST_CASE("derivative operator lowers the order and matches coefficients") {
  const JetSpace& sp = JetSpace::get(3, 3);
  Jet x = Jet::variable(sp, 0, 0.7);
  Jet z = Jet::variable(sp, 2, 1.5);
  Jet f = pow_int(x, 3) * z + exp(z * 0.3);
  Jet fx = f.d(0);
  CHECK(fx.order() == 2);
  CHECK(fx.value() == doctest::Approx(3 * 0.7 * 0.7 * 1.5).epsilon(1e-14));
  Jet fxz = fx.d(2);
  CHECK(fxz.value() == doctest::Approx(3 * 0.7 * 0.7).epsilon(1e-14));
}

TEST_CASE("analytic functions satisfy their identities as jets") {
  const JetSpace& sp = JetSpace::get(1, 4);
  Jet x = Jet::variable(sp, 0, 0.9);
  Jet id1 = cosh(x) * cosh(x) - sinh(x) * sinh(x);
  for (int i = 0; i < sp.size(); ++i) {
    CHECK(id1.coeff(i) == doctest::Approx(i == 0 ? 1.0 : 0.0).epsilon(1e-13));
  }
  Jet id2 = exp(log(x)) - x;
  for (int i = 0; i < sp.size(); ++i) CHECK(std::abs(id2.coeff(i)) < 1e-13);
  Jet id3 = sqrt(x) * sqrt(x) - x;
  for (int i = 0; i < sp.size(); ++i) CHECK(std::abs(id3.coeff(i)) < 1e-13);
}

TEST_CASE("mixed-order arithmetic truncates to the lower order") {
  const JetSpace& s4 = JetSpace::get(2, 4);
  const JetSpace& s2 = JetSpace::get(2, 2);
  Jet a = Jet::variable(s4, 0, 2.0);
  Jet b = Jet::variable(s2, 1, 3.0);
  Jet c = a * b;
  CHECK(c.order() == 2);
  CHECK(c.value() == doctest::Approx(6.0));
}

TEST_CASE("from_partials is the inverse of partial extraction") {
  const JetSpace& sp = JetSpace::get(2, 3);
  Jet x = Jet::variable(sp, 0, 0.3);
  Jet y = Jet::variable(sp, 1, 0.8);
  Jet f = x * y * y + recip(x + 1.0);
  std::vector<double> partials(sp.size());
  for (int i = 0; i < sp.size(); ++i) partials[i] = f.partial(i);
  Jet g = Jet::from_partials(sp, partials);
  for (int i = 0; i < sp.size(); ++i)
    CHECK(g.coeff(i) == doctest::Approx(f.coeff(i)).epsilon(1e-15));
}

TEST_CASE("jet matrix inverse differentiates correctly") {
  const JetSpace& sp = JetSpace::get(2, 2);
  Jet x = Jet::variable(sp, 0, 1.1);
  Jet y = Jet::variable(sp, 1, 0.2);
  Mat<Jet> m(2, Jet(sp, 0.0));
  m(0, 0) = 2.0 + x * x;
  m(0, 1) = m(1, 0) = y;
  m(1, 1) = 1.0 + y * y;
  auto inv = matrix_inverse(m, Jet(sp, 0.0), Jet(sp, 1.0));

  // product is the identity to all stored orders
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) {
      Jet p(sp, 0.0);
      for (int k = 0; k < 2; ++k) p += m(i, k) * inv(k, j);
      for (int c = 0; c < sp.size(); ++c) {
        const double want = (c == 0 && i == j) ? 1.0 : 0.0;
        CHECK(p.coeff(c) == doctest::Approx(want).epsilon(1e-13));
      }
    }

  // derivative of the inverse: d(m^{-1}) = -m^{-1} dm m^{-1}
  Jet d_inv = inv(0, 0).d(0);
  Jet rhs(JetSpace::get(2, 1), 0.0);
  for (int a = 0; a < 2; ++a)
    for (int b = 0; b < 2; ++b) rhs -= inv(0, a) * m(a, b).d(0) * inv(b, 0);
  CHECK(d_inv.value() == doctest::Approx(rhs.value()).epsilon(1e-13));
}

TEST_CASE("determinant of a jet matrix matches cofactor expansion") {
  const JetSpace& sp = JetSpace::get(2, 2);
  Jet x = Jet::variable(sp, 0, 0.5);
  Jet y = Jet::variable(sp, 1, -0.7);
  Mat<Jet> m(2, Jet(sp, 0.0));
  m(0, 0) = 1.0 + x;
  m(0, 1) = x * y;
  m(1, 0) = y;
  m(1, 1) = 2.0 - y;
  Jet det = matrix_determinant(m, Jet(sp, 1.0));
  Jet want = (1.0 + x) * (2.0 - y) - x * y * y;
  for (int c = 0; c < sp.size(); ++c)
    CHECK(det.coeff(c) == doctest::Approx(want.coeff(c)).epsilon(1e-13));
}

TEST_CASE("symmetric eigenvalues and inertia") {
  Mat<double> a(3, 0.0);
  a(0, 0) = 2.0;
  a(1, 1) = -1.0;
  a(2, 2) = 0.5;
  a(0, 1) = a(1, 0) = 0.3;
  auto [pos, neg] = inertia(a);
  CHECK(pos == 2);
  CHECK(neg == 1);
  auto ev = symmetric_eigenvalues(a);
  double trace = 0.0;
  for (double v : ev) trace += v;
  CHECK(trace == doctest::Approx(1.5).epsilon(1e-12));
}
