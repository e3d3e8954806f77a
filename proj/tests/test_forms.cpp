#include <doctest.h>

#include <cmath>

#include "pem/catalog.hpp"
#include "pem/forms.hpp"

using namespace pem;

namespace {

// a generic 1-form field on R^3 with polynomial coefficients
FormField generic_one_form() {
  return {3, 1, [](JetVars vars, std::span<Jet> out) {
            out[0] = vars[1] * vars[2] + vars[0] * 0.5;
            out[1] = vars[0] * vars[0] * 0.3 - vars[2];
            out[2] = vars[1] + 1.0;
          }};
}

}  // namespace

TEST_CASE("exterior derivative of a constant function vanishes") {
  FormField f{2, 0, [](JetVars vars, std::span<Jet> out) {
                out[0] = Jet(vars[0].space(), 3.5);
              }};
  auto df = exterior_d(f).eval(std::vector<double>{0.4, -0.1});
  for (double c : df) CHECK(std::abs(c) < 1e-15);
}

TEST_CASE("d o d = 0") {
  FormField a = generic_one_form();
  auto dda = exterior_d(exterior_d(a));
  auto v = dda.eval(std::vector<double>{0.3, -0.8, 0.5});
  for (double c : v) CHECK(std::abs(c) < 1e-13);

  FormField f{3, 0, [](JetVars vars, std::span<Jet> out) {
                out[0] = vars[0] * vars[1] * vars[2] + recip(1.5 + vars[2]);
              }};
  auto ddf = exterior_d(exterior_d(f)).eval(std::vector<double>{0.1, 0.7, -0.2});
  for (double c : ddf) CHECK(std::abs(c) < 1e-13);
}

TEST_CASE("hodge star on flat R^2: star 1 = dx ^ dy and star star = -1 on 1-forms") {
  auto flat2 = constant_curvature_metric(2, 0.0);
  ChartPoint x{{0.3, 0.9}, flat2.patch.chart_id()};

  FormField one{2, 0, [](JetVars vars, std::span<Jet> out) {
                  out[0] = Jet(vars[0].space(), 1.0);
                }};
  auto star1 = hodge_star(flat2.patch, one, x);
  REQUIRE(star1.size() == 1);
  CHECK(star1[0] == doctest::Approx(1.0));

  // volume form is star of 1
  auto vol = volume_form(flat2.patch).eval(x.coords);
  CHECK(vol[0] == doctest::Approx(star1[0]));

  FormField dx = coordinate_form(2, {0});
  auto sdx = hodge_star(flat2.patch, dx, x);
  CHECK(sdx[0] == doctest::Approx(0.0));
  CHECK(sdx[1] == doctest::Approx(1.0));  // star dx = dy
  FormField dy = coordinate_form(2, {1});
  auto sdy = hodge_star(flat2.patch, dy, x);
  CHECK(sdy[0] == doctest::Approx(-1.0));  // star dy = -dx
}

TEST_CASE("star star sign depends on signature and degree") {
  // p(m-p) even/odd times det sign (-1)^q
  auto mk_const_metric = [](std::vector<double> diag) {
    const int m = static_cast<int>(diag.size());
    int q = 0;
    for (double d : diag)
      if (d < 0) q++;
    MetricFn fn = [diag, m](JetVars vars, Mat<Jet>& out) {
      const JetSpace& sp = vars[0].space();
      for (int i = 0; i < m; ++i)
        for (int j = 0; j < m; ++j) out(i, j) = Jet(sp, i == j ? diag[i] : 0.0);
    };
    return MetricPatch(m, {m - q, q}, "const", Domain::cube(m, 2.0), fn);
  };

  struct Case {
    std::vector<double> diag;
    int degree;
  };
  for (const auto& tc : {Case{{1, 1, 1}, 1}, Case{{-1, 1, 1}, 1},
                         Case{{-1, 1, 1, 1}, 2}, Case{{1, 1, 1, 1}, 2}}) {
    MetricPatch patch = mk_const_metric(tc.diag);
    const int m = patch.dim();
    const int p = tc.degree;
    const int s = patch.signature().det_sign();
    const double expect = s * ((p * (m - p)) % 2 == 0 ? 1.0 : -1.0);

    // a coordinate p-form with a generic constant combination
    const auto& basis = FormBasis::get(m, p);
    FormField a{m, p, [nb = basis.size()](JetVars vars, std::span<Jet> out) {
                  for (int i = 0; i < nb; ++i)
                    out[i] = Jet(vars[0].space(), 1.0 + 0.37 * i);
                }};
    ChartPoint x{std::vector<double>(m, 0.1), "const"};

    // evaluate star star via a wrapper field holding the first star's value
    auto starred = hodge_star(patch, a, x);
    FormField sa{m, m - p, [starred](JetVars vars, std::span<Jet> out) {
                   for (std::size_t i = 0; i < out.size(); ++i)
                     out[i] = Jet(vars[0].space(), starred[i]);
                 }};
    auto ss = hodge_star(patch, sa, x);
    auto orig = a.eval(x.coords);
    for (std::size_t i = 0; i < ss.size(); ++i) {
      CHECK(ss[i] == doctest::Approx(expect * orig[i]).epsilon(1e-10));
    }
  }
}

TEST_CASE("wedge is graded anticommutative and interior products anticommute") {
  FormField a = generic_one_form();
  FormField b{3, 1, [](JetVars vars, std::span<Jet> out) {
                out[0] = vars[2] - vars[1] * 0.4;
                out[1] = vars[0] + 0.2;
                out[2] = vars[0] * vars[1];
              }};
  std::vector<double> x{0.5, -0.3, 0.8};
  auto ab = wedge(a, b).eval(x);
  auto ba = wedge(b, a).eval(x);
  for (std::size_t i = 0; i < ab.size(); ++i)
    CHECK(ab[i] == doctest::Approx(-ba[i]).epsilon(1e-13));

  VectorField X{3, [](JetVars vars, std::span<Jet> out) {
                  out[0] = Jet(vars[0].space(), 1.0);
                  out[1] = vars[0];
                  out[2] = vars[1] * 2.0;
                }};
  VectorField Y{3, [](JetVars vars, std::span<Jet> out) {
                  out[0] = vars[2];
                  out[1] = Jet(vars[0].space(), -1.0);
                  out[2] = vars[0] * 0.5;
                }};
  FormField two = wedge(a, b);
  auto xy = interior_product(Y, interior_product(X, two)).eval(x);
  auto yx = interior_product(X, interior_product(Y, two)).eval(x);
  REQUIRE(xy.size() == 1);
  CHECK(xy[0] == doctest::Approx(-yx[0]).epsilon(1e-13));
}

TEST_CASE("insertion of the scaling field into u^p du ^ phi recovers phi at u = 1") {
  // phi a 2-form on the first three coordinates, extended to (x, u) space
  FormField phi{3, 2, [](JetVars vars, std::span<Jet> out) {
                  out[0] = vars[0] + 2.0;          // dx0^dx1
                  out[1] = vars[1] * vars[2];      // dx0^dx2
                  out[2] = Jet(vars[0].space(), -0.7);  // dx1^dx2
                }};
  const int p = 2;
  FormField ext{4, 2, [phi](JetVars vars, std::span<Jet> out) {
                  const auto& ob = FormBasis::get(4, 2);
                  const auto& ib = FormBasis::get(3, 2);
                  std::vector<Jet> comps(ib.size(), Jet(vars[0].space(), 0.0));
                  phi.fn(vars.subspan(0, 3), comps);
                  for (int i = 0; i < ob.size(); ++i) {
                    auto T = ob.tuple(i);
                    if (T[0] < 3 && T[1] < 3) {
                      std::vector<int> t(T.begin(), T.end());
                      out[i] = comps[ib.index_of(t)];
                    } else {
                      out[i] = Jet(vars[0].space(), 0.0);
                    }
                  }
                }};
  FormField du = coordinate_form(4, {3});
  FormField lifted = scale_form(wedge(du, ext), [p](JetVars vars) {
    return pow_int(vars[3], p);
  });
  VectorField X = coordinate_scaling_field(4, 3);
  FormField recovered = interior_product(X, lifted);

  std::vector<double> x{0.4, -0.2, 0.9, 1.0};  // u = 1
  auto rec = recovered.eval(x);
  auto want = ext.eval(x);
  REQUIRE(rec.size() == want.size());
  for (std::size_t i = 0; i < rec.size(); ++i)
    CHECK(rec[i] == doctest::Approx(want[i]).epsilon(1e-15));
}

TEST_CASE("errors: degree mismatch and missing orientation") {
  FormField a = generic_one_form();
  FormField b{3, 2, [](JetVars vars, std::span<Jet> out) {
                for (auto& j : out) j = Jet(vars[0].space(), 0.0);
              }};
  CHECK_THROWS_AS(form_sum(a, b), DegreeMismatch);

  auto flat2 = constant_curvature_metric(2, 0.0);
  MetricPatch unoriented = flat2.patch;
  unoriented.set_oriented(false);
  CHECK_THROWS_AS(volume_form(unoriented), OrientationUnset);
  ChartPoint x{{0.1, 0.2}, unoriented.chart_id()};
  FormField dx = coordinate_form(2, {0});
  CHECK_THROWS_AS(hodge_star(unoriented, dx, x), OrientationUnset);
}

TEST_CASE("the metric volume form is parallel") {
  auto s2 = constant_curvature_metric(2, 1.0);
  FormField vol = volume_form(s2.patch);
  ChartPoint x{{0.5, -0.4}, s2.patch.chart_id()};
  for (int dir = 0; dir < 2; ++dir) {
    std::vector<double> Y(2, 0.0);
    Y[dir] = 1.0;
    auto cd = covariant_derivative(s2.patch, vol, Y, x);
    for (double c : cd) CHECK(std::abs(c) < 1e-12);
  }
}
