#pragma once

// Test-only oracles, independent of the jet machinery:
//  - curvature from central finite differences of a plain component function
//  - dense fixed-step RK4 parallel transport
// Expected values asserted in the suites were computed with these before the
// main build and frozen.

#include <cmath>
#include <functional>
#include <vector>

#include "pem/linalg.hpp"

namespace pem::testing {

using PlainMetricFn = std::function<Mat<double>(const std::vector<double>&)>;

struct FdCurvatureResult {
  Tensor3<double> gamma;
  Tensor4<double> riemann;  // lowered
  Mat<double> ricci;
  double scalar = 0.0;
};

// Curvature via finite differences only: Gamma from first differences of g,
// then Riemann from first differences of Gamma (each Gamma evaluation itself
// differencing g). Accuracy ~ h^2 per level.
inline FdCurvatureResult fd_curvature(const PlainMetricFn& g_fn,
                                      const std::vector<double>& x0,
                                      double h = 1e-3) {
  const int n = static_cast<int>(x0.size());

  auto gamma_at = [&](const std::vector<double>& x) {
    Mat<double> g = g_fn(x);
    Mat<double> ginv = matrix_inverse(g, 0.0, 1.0);
    Tensor3<double> dg(n, 0.0);
    for (int a = 0; a < n; ++a) {
      auto xp = x, xm = x;
      xp[a] += h;
      xm[a] -= h;
      Mat<double> gp = g_fn(xp), gm = g_fn(xm);
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) dg(a, i, j) = (gp(i, j) - gm(i, j)) / (2 * h);
    }
    Tensor3<double> gam(n, 0.0);
    for (int c = 0; c < n; ++c)
      for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b) {
          double s = 0.0;
          for (int d = 0; d < n; ++d)
            s += ginv(c, d) * (dg(a, d, b) + dg(b, d, a) - dg(d, a, b));
          gam(c, a, b) = 0.5 * s;
        }
    return gam;
  };

  FdCurvatureResult out{gamma_at(x0), Tensor4<double>(n, 0.0), Mat<double>(n, 0.0),
                        0.0};

  // dGamma(d, c, a, b) = d_d Gamma^c_ab
  Tensor4<double> dgam(n, 0.0);
  for (int d = 0; d < n; ++d) {
    auto xp = x0, xm = x0;
    xp[d] += h;
    xm[d] -= h;
    Tensor3<double> gp = gamma_at(xp), gm = gamma_at(xm);
    for (int c = 0; c < n; ++c)
      for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b)
          dgam(d, c, a, b) = (gp(c, a, b) - gm(c, a, b)) / (2 * h);
  }

  const Tensor3<double>& gam = out.gamma;
  Mat<double> g0 = g_fn(x0);
  Mat<double> ginv0 = matrix_inverse(g0, 0.0, 1.0);
  Tensor4<double> riem_up(n, 0.0);
  for (int c = 0; c < n; ++c)
    for (int d = 0; d < n; ++d)
      for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b) {
          double s = dgam(a, c, b, d) - dgam(b, c, a, d);
          for (int e = 0; e < n; ++e)
            s += gam(c, a, e) * gam(e, b, d) - gam(c, b, e) * gam(e, a, d);
          riem_up(c, d, a, b) = s;
        }
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b) {
          double s = 0.0;
          for (int c = 0; c < n; ++c) s += g0(i, c) * riem_up(c, j, a, b);
          out.riemann(i, j, a, b) = s;
        }
      double r = 0.0;
      for (int m = 0; m < n; ++m) r += riem_up(m, i, m, j);
      out.ricci(i, j) = r;
    }
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) out.scalar += ginv0(i, j) * out.ricci(i, j);
  return out;
}

// Dense fixed-step RK4 transport of a single vector along a curve given by a
// position function and its velocity.
inline std::vector<double> rk4_transport(
    const PlainMetricFn& g_fn,
    const std::function<std::vector<double>(double)>& curve,
    const std::function<std::vector<double>(double)>& velocity,
    std::vector<double> v, int steps, double fd_h = 1e-4) {
  const int n = static_cast<int>(v.size());
  auto gamma_at = [&](const std::vector<double>& x) {
    Mat<double> g = g_fn(x);
    Mat<double> ginv = matrix_inverse(g, 0.0, 1.0);
    Tensor3<double> dg(n, 0.0);
    for (int a = 0; a < n; ++a) {
      auto xp = x, xm = x;
      xp[a] += fd_h;
      xm[a] -= fd_h;
      Mat<double> gp = g_fn(xp), gm = g_fn(xm);
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) dg(a, i, j) = (gp(i, j) - gm(i, j)) / (2 * fd_h);
    }
    Tensor3<double> gam(n, 0.0);
    for (int c = 0; c < n; ++c)
      for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b) {
          double s = 0.0;
          for (int d = 0; d < n; ++d)
            s += ginv(c, d) * (dg(a, d, b) + dg(b, d, a) - dg(d, a, b));
          gam(c, a, b) = 0.5 * s;
        }
    return gam;
  };
  auto rhs = [&](double t, const std::vector<double>& F) {
    auto gam = gamma_at(curve(t));
    auto vel = velocity(t);
    std::vector<double> d(n, 0.0);
    for (int k = 0; k < n; ++k) {
      double s = 0.0;
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) s += gam(k, i, j) * vel[i] * F[j];
      d[k] = -s;
    }
    return d;
  };
  const double dt = 1.0 / steps;
  double t = 0.0;
  for (int s = 0; s < steps; ++s) {
    auto k1 = rhs(t, v);
    std::vector<double> tmp(n);
    for (int i = 0; i < n; ++i) tmp[i] = v[i] + 0.5 * dt * k1[i];
    auto k2 = rhs(t + 0.5 * dt, tmp);
    for (int i = 0; i < n; ++i) tmp[i] = v[i] + 0.5 * dt * k2[i];
    auto k3 = rhs(t + 0.5 * dt, tmp);
    for (int i = 0; i < n; ++i) tmp[i] = v[i] + dt * k3[i];
    auto k4 = rhs(t + dt, tmp);
    for (int i = 0; i < n; ++i)
      v[i] += dt / 6.0 * (k1[i] + 2 * k2[i] + 2 * k3[i] + k4[i]);
    t += dt;
  }
  return v;
}

// The conformally flat constant-curvature component function, written out
// directly so the oracle does not share code with the catalog.
inline PlainMetricFn conformal_factor_metric(int m, double K) {
  return [m, K](const std::vector<double>& x) {
    double r2 = 0.0;
    for (int i = 0; i < m; ++i) r2 += x[i] * x[i];
    const double f = 1.0 / std::pow(1.0 + K * r2 / 4.0, 2);
    Mat<double> g(m, 0.0);
    for (int i = 0; i < m; ++i) g(i, i) = f;
    return g;
  };
}

}  // namespace pem::testing
