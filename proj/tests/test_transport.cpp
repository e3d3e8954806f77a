#include <doctest.h>

#include <cmath>

#include "oracle.hpp"
#include "pem/catalog.hpp"
#include "pem/transport.hpp"

using namespace pem;

namespace {

PathSpec circle_loop(double radius, const std::string& chart) {
  auto curve = [radius, chart](double t) {
    return ChartPoint{{radius * std::cos(2 * M_PI * t), radius * std::sin(2 * M_PI * t)},
                      chart};
  };
  auto vel = [radius](double t) {
    return std::vector<double>{-radius * 2 * M_PI * std::sin(2 * M_PI * t),
                               radius * 2 * M_PI * std::cos(2 * M_PI * t)};
  };
  return PathSpec{curve, true, vel};
}

}  // namespace

TEST_CASE("flat space: closed loops return the frame unchanged") {
  auto flat = constant_curvature_metric(2, 0.0);
  PathSpec loop = circle_loop(1.3, flat.patch.chart_id());
  std::vector<std::vector<double>> frame{{1.0, 0.0}, {0.0, 1.0}};
  auto res = parallel_transport(flat.patch, loop, frame);
  for (int a = 0; a < 2; ++a)
    for (int i = 0; i < 2; ++i)
      CHECK(std::abs(res.frame[a][i] - frame[a][i]) < 1e-9);
}

TEST_CASE("sphere latitude loop rotates the frame by the classical angle") {
  // stereographic radius rho = 2 tan(theta/2) traces the colatitude-theta
  // circle; the holonomy rotation is 2 pi (1 - cos theta). The dense
  // fixed-step oracle integrator confirmed this closed form before the
  // adaptive path was built.
  auto s2 = constant_curvature_metric(2, 1.0);
  const double rho = 1.3;
  const double theta = 2.0 * std::atan(rho / 2.0);
  const double expected_angle = 2.0 * M_PI * (1.0 - std::cos(theta));

  PathSpec loop = circle_loop(rho, s2.patch.chart_id());
  std::vector<std::vector<double>> frame{{1.0, 0.0}, {0.0, 1.0}};
  auto res = parallel_transport(s2.patch, loop, frame,
                                IntegrationOptions{1e-11, 1e-11, 2000000});

  // conformal chart: chart components rotate by the same angle
  const double c = res.frame[0][0], s = res.frame[0][1];
  const double angle = std::atan2(s, c);
  const double want = std::remainder(expected_angle, 2.0 * M_PI);
  CHECK(std::abs(std::remainder(angle - want, 2.0 * M_PI)) < 1e-7);

  // oracle agreement (dense fixed-step RK4 on the raw component function)
  auto oracle = testing::rk4_transport(
      testing::conformal_factor_metric(2, 1.0), [&](double t) {
        return std::vector<double>{rho * std::cos(2 * M_PI * t),
                                   rho * std::sin(2 * M_PI * t)};
      },
      [&](double t) {
        return std::vector<double>{-rho * 2 * M_PI * std::sin(2 * M_PI * t),
                                   rho * 2 * M_PI * std::cos(2 * M_PI * t)};
      },
      {1.0, 0.0}, 20000);
  CHECK(std::abs(res.frame[0][0] - oracle[0]) < 1e-6);
  CHECK(std::abs(res.frame[0][1] - oracle[1]) < 1e-6);
}

TEST_CASE("transport preserves inner products and inverts along reversed loops") {
  auto s2 = constant_curvature_metric(2, 1.0);
  PathSpec loop = circle_loop(0.9, s2.patch.chart_id());
  std::vector<std::vector<double>> frame{{0.7, 0.1}, {-0.2, 1.1}};
  auto fwd = parallel_transport(s2.patch, loop, frame);

  // inner products conserved
  auto g0 = s2.patch.components(loop.curve(0.0));
  auto g1 = s2.patch.components(loop.curve(1.0));
  for (int a = 0; a < 2; ++a)
    for (int b = 0; b < 2; ++b) {
      double ip0 = 0.0, ip1 = 0.0;
      for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j) {
          ip0 += g0(i, j) * frame[a][i] * frame[b][j];
          ip1 += g1(i, j) * fwd.frame[a][i] * fwd.frame[b][j];
        }
      CHECK(std::abs(ip0 - ip1) < 2e-9);
    }

  // loop followed by its reverse, as two smooth segments
  const IntegrationOptions tight{1e-12, 1e-12, 2000000};
  PathSpec reversed{[&loop](double t) { return loop.curve(1.0 - t); }, true,
                    std::nullopt};
  auto out = parallel_transport(s2.patch, loop, frame, tight);
  auto back = parallel_transport(s2.patch, reversed, out.frame, tight);
  for (int a = 0; a < 2; ++a)
    for (int i = 0; i < 2; ++i)
      CHECK(std::abs(back.frame[a][i] - frame[a][i]) < 2e-9);
}

TEST_CASE("transport fails out of domain") {
  auto s2 = constant_curvature_metric(2, 1.0);
  PathSpec escape{[&](double t) {
                    return ChartPoint{{t * 10.0, 0.0}, s2.patch.chart_id()};
                  },
                  false, std::nullopt};
  std::vector<std::vector<double>> frame{{1.0, 0.0}};
  CHECK_THROWS_AS(parallel_transport(s2.patch, escape, frame), OutOfDomain);
}

TEST_CASE("flow with jacobian reproduces the exact scaling flow") {
  VectorField euler = coordinate_scaling_field(2, 0);
  auto res = flow_with_jacobian(euler, {1.5, 0.7}, 0.4);
  CHECK(res.point[0] == doctest::Approx(1.5 * std::exp(0.4)).epsilon(1e-10));
  CHECK(res.point[1] == doctest::Approx(0.7));
  CHECK(res.jacobian(0, 0) == doctest::Approx(std::exp(0.4)).epsilon(1e-10));
  CHECK(res.jacobian(1, 1) == doctest::Approx(1.0));
  CHECK(std::abs(res.jacobian(0, 1)) < 1e-12);
}
