#include <doctest.h>

#include <cmath>

#include "oracle.hpp"
#include "pem/catalog.hpp"
#include "pem/curvature.hpp"
#include "pem/sample.hpp"
#include "pem/vector_field.hpp"
#include "pem/transport.hpp"

using namespace pem;

namespace {

double max_abs(const Mat<double>& m) {
  double w = 0.0;
  for (int i = 0; i < m.n(); ++i)
    for (int j = 0; j < m.n(); ++j) w = std::max(w, std::abs(m(i, j)));
  return w;
}

std::vector<ChartPoint> seeded_points(const MetricPatch& p, int count,
                                      std::uint64_t seed = 7) {
  SamplePlan plan{seed, count, std::nullopt};
  std::vector<ChartPoint> out;
  for (auto& c : sample_coords(p.domain(), plan)) out.push_back({c, p.chart_id()});
  return out;
}

}  // namespace

TEST_CASE("finite-difference oracle agrees with the closed forms it anchors") {
  // Frozen expectations Sc(S^m, K) = m(m-1)K were confirmed with this oracle
  // before the jet path existed; keep the oracle honest here.
  auto fd = testing::fd_curvature(testing::conformal_factor_metric(2, 1.0),
                                  {0.3, -0.5});
  CHECK(fd.scalar == doctest::Approx(2.0).epsilon(1e-5));
  auto fd3 = testing::fd_curvature(testing::conformal_factor_metric(3, -1.0),
                                   {0.2, 0.1, -0.3});
  CHECK(fd3.scalar == doctest::Approx(-6.0).epsilon(1e-5));
}

TEST_CASE("metric_eval returns exact inverses and flags degeneracy") {
  auto flat = constant_curvature_metric(3, 0.0);
  ChartPoint x{{0.5, -1.2, 2.0}, flat.patch.chart_id()};
  auto m = metric_eval(flat.patch, x);
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) {
      CHECK(m.g(i, j) == doctest::Approx(i == j ? 1.0 : 0.0));
      CHECK(m.g_inv(i, j) == doctest::Approx(i == j ? 1.0 : 0.0));
    }

  auto s2 = constant_curvature_metric(2, 1.0);
  ChartPoint origin{{0.0, 0.0}, s2.patch.chart_id()};
  auto ms = metric_eval(s2.patch, origin);
  CHECK(ms.g(0, 0) == doctest::Approx(1.0));
  CHECK(ms.g(0, 1) == doctest::Approx(0.0));

  // product g * g^{-1} within 1e-12 at a generic point
  ChartPoint y{{0.4, 0.9}, s2.patch.chart_id()};
  auto my = metric_eval(s2.patch, y);
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) {
      double s = 0.0;
      for (int k = 0; k < 2; ++k) s += my.g(i, k) * my.g_inv(k, j);
      CHECK(std::abs(s - (i == j ? 1.0 : 0.0)) < 1e-12);
    }

  // out-of-domain rejection
  ChartPoint far{{10.0, 0.0}, s2.patch.chart_id()};
  CHECK_THROWS_AS(metric_eval(s2.patch, far), OutOfDomain);

  // a singular component function
  MetricFn deg = [](JetVars vars, Mat<Jet>& out) {
    out(0, 0) = vars[0] * 0.0;
    out(0, 1) = out(1, 0) = Jet(vars[0].space(), 0.0);
    out(1, 1) = Jet(vars[0].space(), 1.0);
  };
  MetricPatch bad(2, {2, 0}, "degenerate", Domain::cube(2, 1.0), deg);
  ChartPoint z{{0.1, 0.1}, "degenerate"};
  CHECK_THROWS_AS(metric_eval(bad, z), SingularMetric);
}

TEST_CASE("constant-curvature charts have the frozen curvature constants") {
  auto flat = constant_curvature_metric(3, 0.0);
  ChartPoint x{{0.5, -1.2, 2.0}, flat.patch.chart_id()};
  auto c = curvature(flat.patch, x);
  CHECK(max_abs(c.ricci) < 1e-14);
  CHECK(std::abs(c.scalar) < 1e-14);

  for (double K : {1.0, 2.0}) {
    auto sph = constant_curvature_metric(2, K);
    for (const auto& p : seeded_points(sph.patch, 5)) {
      CHECK(curvature(sph.patch, p).scalar == doctest::Approx(2 * K).epsilon(1e-8));
    }
    auto sph3 = constant_curvature_metric(3, K);
    for (const auto& p : seeded_points(sph3.patch, 5)) {
      CHECK(curvature(sph3.patch, p).scalar == doctest::Approx(6 * K).epsilon(1e-8));
    }
  }

  auto h3 = constant_curvature_metric(3, -1.0);
  for (const auto& p : seeded_points(h3.patch, 5)) {
    auto c3 = curvature(h3.patch, p);
    auto g = h3.patch.components(p);
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j)
        CHECK(c3.ricci(i, j) == doctest::Approx(-2.0 * g(i, j)).epsilon(1e-8));
  }
}

TEST_CASE("kernel curvature matches the independent finite-difference oracle") {
  auto s2 = constant_curvature_metric(2, 1.0);
  ChartPoint x{{0.3, -0.5}, s2.patch.chart_id()};
  auto jet_curv = curvature(s2.patch, x);
  auto fd = testing::fd_curvature(testing::conformal_factor_metric(2, 1.0),
                                  x.coords);
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j)
      CHECK(jet_curv.ricci(i, j) == doctest::Approx(fd.ricci(i, j)).epsilon(1e-5));
}

TEST_CASE("curvature tensor symmetries hold at seeded points") {
  std::vector<EinsteinSpec> specs = {
      constant_curvature_metric(2, 1.0), constant_curvature_metric(3, -1.0),
      constant_curvature_metric(4, 0.5),
      einstein_product(constant_curvature_metric(2, 1.0),
                       constant_curvature_metric(2, 1.0), +1)};
  for (const auto& spec : specs) {
    const int n = spec.m;
    for (const auto& p : seeded_points(spec.patch, 20)) {
      for (JetMode mode : {JetMode::analytic, JetMode::finite_difference}) {
        const double tol = (mode == JetMode::analytic) ? 1e-8 : 1e-4;
        auto c = curvature(spec.patch, p, mode);
        double worst = 0.0;
        for (int a = 0; a < n; ++a)
          for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j)
              worst = std::max(worst,
                               std::abs(c.christoffel(a, i, j) - c.christoffel(a, j, i)));
        const auto& R = c.riemann_lowered;
        for (int i = 0; i < n; ++i)
          for (int j = 0; j < n; ++j)
            for (int k = 0; k < n; ++k)
              for (int l = 0; l < n; ++l) {
                worst = std::max(worst, std::abs(R(i, j, k, l) + R(j, i, k, l)));
                worst = std::max(worst, std::abs(R(i, j, k, l) + R(i, j, l, k)));
                worst = std::max(worst, std::abs(R(i, j, k, l) - R(k, l, i, j)));
                worst = std::max(
                    worst, std::abs(R(i, j, k, l) + R(i, k, l, j) + R(i, l, j, k)));
              }
        auto m = metric_eval(spec.patch, p);
        double tr = 0.0;
        for (int i = 0; i < n; ++i)
          for (int j = 0; j < n; ++j) tr += m.g_inv(i, j) * c.ricci(i, j);
        worst = std::max(worst, std::abs(tr - c.scalar));
        CHECK(worst < tol);
        if (mode == JetMode::finite_difference) break;  // once per spec is plenty
      }
    }
  }
}

TEST_CASE("contracted Bianchi identity: Einstein tensor is divergence free") {
  auto s3 = constant_curvature_metric(3, 1.0);
  for (const auto& p : seeded_points(s3.patch, 5)) {
    CHECK(einstein_divergence_residual(s3.patch, p) < 1e-6);
  }
  auto prod = einstein_product(constant_curvature_metric(2, 1.0),
                               constant_curvature_metric(2, 1.0), +1);
  for (const auto& p : seeded_points(prod.patch, 3)) {
    CHECK(einstein_divergence_residual(prod.patch, p) < 1e-6);
  }
}

TEST_CASE("jet provider agrees with finite differences at first order") {
  auto s2 = constant_curvature_metric(2, 1.0);
  ChartPoint x{{0.4, 0.2}, s2.patch.chart_id()};
  auto exact = s2.patch.jets(x, 1);
  auto fd = finite_difference_jets(s2.patch, x, 1);
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j)
      for (int a = 0; a < 2; ++a)
        CHECK(exact(i, j).d(a).value() ==
              doctest::Approx(fd(i, j).d(a).value()).epsilon(1e-6));
}

TEST_CASE("weyl and bach vanish on conformally flat charts") {
  auto flat4 = constant_curvature_metric(4, 0.0);
  ChartPoint x{{0.2, -0.7, 1.1, 0.4}, flat4.patch.chart_id()};
  auto cc = conformal_curvature(flat4.patch, x);
  double wmax = 0.0;
  for (int a = 0; a < 4; ++a)
    for (int b = 0; b < 4; ++b)
      for (int c = 0; c < 4; ++c)
        for (int d = 0; d < 4; ++d)
          wmax = std::max(wmax, std::abs(cc.weyl_lowered(a, b, c, d)));
  CHECK(wmax < 1e-12);
  REQUIRE(cc.bach.has_value());
  CHECK(max_abs(*cc.bach) < 1e-10);

  auto s4 = constant_curvature_metric(4, 1.0);
  for (const auto& p : seeded_points(s4.patch, 5)) {
    auto c4 = conformal_curvature(s4.patch, p);
    double w = 0.0;
    for (int a = 0; a < 4; ++a)
      for (int b = 0; b < 4; ++b)
        for (int c = 0; c < 4; ++c)
          for (int d = 0; d < 4; ++d)
            w = std::max(w, std::abs(c4.weyl_lowered(a, b, c, d)));
    CHECK(w < 1e-8);
  }
}

TEST_CASE("weyl is trace free and bach is symmetric trace free") {
  // the sphere-sphere product has genuinely nonzero Weyl in dimension 4
  auto prod = product_metric(constant_curvature_metric(2, 1.0),
                             constant_curvature_metric(2, 1.0));
  for (const auto& p : seeded_points(prod, 5)) {
    auto cc = conformal_curvature(prod, p);
    auto m = metric_eval(prod, p);
    double worst = 0.0;
    for (int j = 0; j < 4; ++j)
      for (int l = 0; l < 4; ++l) {
        double tr = 0.0;
        for (int i = 0; i < 4; ++i)
          for (int k = 0; k < 4; ++k)
            tr += m.g_inv(i, k) * cc.weyl_lowered(i, j, k, l);
        worst = std::max(worst, std::abs(tr));
      }
    CHECK(worst < 1e-9);
    const Mat<double>& B = *cc.bach;
    double btr = 0.0;
    for (int i = 0; i < 4; ++i)
      for (int j = 0; j < 4; ++j) {
        btr += m.g_inv(i, j) * B(i, j);
        CHECK(std::abs(B(i, j) - B(j, i)) < 1e-9);
      }
    CHECK(std::abs(btr) < 1e-8);
  }
}

TEST_CASE("dimension-4 quartic Weyl identity") {
  // |C|^2 delta^a_b = 4 C^{acde} C_{bcde} holds for any 4-metric; the
  // sphere-sphere product keeps |C|^2 bounded away from zero
  auto prod = product_metric(constant_curvature_metric(2, 1.0),
                             constant_curvature_metric(2, 1.0));
  for (const auto& p : seeded_points(prod, 5)) {
    auto cc = conformal_curvature(prod, p);
    auto m = metric_eval(prod, p);
    const int n = 4;
    // raise all indices of W
    Tensor4<double> Wup(n, 0.0);
    for (int a = 0; a < n; ++a)
      for (int b = 0; b < n; ++b)
        for (int c = 0; c < n; ++c)
          for (int d = 0; d < n; ++d) {
            double s = 0.0;
            for (int e = 0; e < n; ++e)
              for (int f = 0; f < n; ++f)
                for (int g = 0; g < n; ++g)
                  for (int h = 0; h < n; ++h)
                    s += m.g_inv(a, e) * m.g_inv(b, f) * m.g_inv(c, g) *
                         m.g_inv(d, h) * cc.weyl_lowered(e, f, g, h);
            Wup(a, b, c, d) = s;
          }
    double norm2 = 0.0;
    for (int a = 0; a < n; ++a)
      for (int b = 0; b < n; ++b)
        for (int c = 0; c < n; ++c)
          for (int d = 0; d < n; ++d)
            norm2 += Wup(a, b, c, d) * cc.weyl_lowered(a, b, c, d);
    REQUIRE(norm2 > 1e-3);  // genuinely nontrivial Weyl here
    for (int a = 0; a < n; ++a)
      for (int b = 0; b < n; ++b) {
        double rhs = 0.0;
        for (int c = 0; c < n; ++c)
          for (int d = 0; d < n; ++d)
            for (int e = 0; e < n; ++e) {
              double Wb = 0.0;  // lower the first slot to b
              for (int f = 0; f < n; ++f) Wb += m.g(b, f) * Wup(f, c, d, e);
              rhs += Wup(a, c, d, e) * Wb;
            }
        const double lhs = (a == b) ? norm2 : 0.0;
        CHECK(std::abs(4.0 * rhs - lhs) < 1e-8 * std::max(1.0, norm2));
      }
  }
}

TEST_CASE("lie derivative: trivial and Euler cases") {
  auto flat2 = constant_curvature_metric(2, 0.0);
  ChartPoint x{{0.7, -0.3}, flat2.patch.chart_id()};
  auto z = lie_derivative_metric(flat2.patch, zero_field(2), x);
  CHECK(max_abs(z) < 1e-15);

  VectorField euler = field_sum(coordinate_scaling_field(2, 0),
                                coordinate_scaling_field(2, 1));
  auto lie = lie_derivative_metric(flat2.patch, euler, x);
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j)
      CHECK(lie(i, j) == doctest::Approx(i == j ? 2.0 : 0.0).epsilon(1e-13));
}

TEST_CASE("lie derivative matches the flow pullback at second order") {
  auto s2 = constant_curvature_metric(2, 1.0);
  ChartPoint x{{0.4, -0.2}, s2.patch.chart_id()};
  VectorField V{2, [](JetVars vars, std::span<Jet> out) {
                  out[0] = vars[1] * 0.7 + vars[0] * 0.2;
                  out[1] = vars[0] * vars[0] * 0.5 - vars[1];
                }};
  auto covariant = lie_derivative_metric(s2.patch, V, x);

  auto pullback_at = [&](double h) {
    // (phi_h^* g)(x) = J^T g(phi_h x) J
    auto fwd = flow_with_jacobian(V, x.coords, h);
    auto g = s2.patch.components({fwd.point, x.chart_id});
    Mat<double> out(2, 0.0);
    for (int i = 0; i < 2; ++i)
      for (int j = 0; j < 2; ++j) {
        double s = 0.0;
        for (int a = 0; a < 2; ++a)
          for (int b = 0; b < 2; ++b)
            s += fwd.jacobian(a, i) * g(a, b) * fwd.jacobian(b, j);
        out(i, j) = s;
      }
    return out;
  };
  auto flow_estimate = [&](double h) {
    auto p = pullback_at(h), m = pullback_at(-h);
    Mat<double> out(2, 0.0);
    for (int i = 0; i < 2; ++i)
      for (int j = 0; j < 2; ++j) out(i, j) = (p(i, j) - m(i, j)) / (2 * h);
    return out;
  };

  auto err = [&](double h) {
    auto est = flow_estimate(h);
    double w = 0.0;
    for (int i = 0; i < 2; ++i)
      for (int j = 0; j < 2; ++j) w = std::max(w, std::abs(est(i, j) - covariant(i, j)));
    return w;
  };
  const double e1 = err(1e-2);
  const double e2 = err(5e-3);
  const double order = std::log2(e1 / e2);
  CHECK(order > 1.9);  // O(h^2) convergence of the centered flow difference
}
