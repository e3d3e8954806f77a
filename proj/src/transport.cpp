#include "pem/transport.hpp"

#include <cmath>

namespace pem {

namespace {

// Dormand-Prince 5(4) coefficients.
constexpr double A21 = 1.0 / 5;
constexpr double A31 = 3.0 / 40, A32 = 9.0 / 40;
constexpr double A41 = 44.0 / 45, A42 = -56.0 / 15, A43 = 32.0 / 9;
constexpr double A51 = 19372.0 / 6561, A52 = -25360.0 / 2187, A53 = 64448.0 / 6561,
                 A54 = -212.0 / 729;
constexpr double A61 = 9017.0 / 3168, A62 = -355.0 / 33, A63 = 46732.0 / 5247,
                 A64 = 49.0 / 176, A65 = -5103.0 / 18656;
constexpr double B1 = 35.0 / 384, B3 = 500.0 / 1113, B4 = 125.0 / 192,
                 B5 = -2187.0 / 6784, B6 = 11.0 / 84;
constexpr double C2 = 1.0 / 5, C3 = 3.0 / 10, C4 = 4.0 / 5, C5 = 8.0 / 9;
constexpr double E1 = 71.0 / 57600, E3 = -71.0 / 16695, E4 = 71.0 / 1920,
                 E5 = -17253.0 / 339200, E6 = 22.0 / 525, E7 = -1.0 / 40;

using Rhs = std::function<void(double, const std::vector<double>&, std::vector<double>&)>;

// Adaptive integration of y' = f(t, y) from t0 to t1; returns steps taken.
int integrate(const Rhs& f, std::vector<double>& y, double t0, double t1,
              const IntegrationOptions& opts) {
  const std::size_t n = y.size();
  std::vector<double> k1(n), k2(n), k3(n), k4(n), k5(n), k6(n), k7(n), yt(n), y5(n);
  double t = t0;
  double h = (t1 - t0) * 0.05;
  int steps = 0;
  bool have_k1 = false;
  while ((t1 - t) * (t1 - t0) > 0.0) {
    if (std::abs(h) < 1e-14 * std::abs(t1 - t0)) {
      throw IntegrationFailure("step size underflow at t = " + std::to_string(t));
    }
    if ((t + h - t1) * (t1 - t0) > 0.0) h = t1 - t;
    if (!have_k1) {
      f(t, y, k1);
      have_k1 = true;
    }
    for (std::size_t i = 0; i < n; ++i) yt[i] = y[i] + h * A21 * k1[i];
    f(t + C2 * h, yt, k2);
    for (std::size_t i = 0; i < n; ++i) yt[i] = y[i] + h * (A31 * k1[i] + A32 * k2[i]);
    f(t + C3 * h, yt, k3);
    for (std::size_t i = 0; i < n; ++i)
      yt[i] = y[i] + h * (A41 * k1[i] + A42 * k2[i] + A43 * k3[i]);
    f(t + C4 * h, yt, k4);
    for (std::size_t i = 0; i < n; ++i)
      yt[i] = y[i] + h * (A51 * k1[i] + A52 * k2[i] + A53 * k3[i] + A54 * k4[i]);
    f(t + C5 * h, yt, k5);
    for (std::size_t i = 0; i < n; ++i)
      yt[i] = y[i] +
              h * (A61 * k1[i] + A62 * k2[i] + A63 * k3[i] + A64 * k4[i] + A65 * k5[i]);
    f(t + h, yt, k6);
    for (std::size_t i = 0; i < n; ++i)
      y5[i] = y[i] + h * (B1 * k1[i] + B3 * k3[i] + B4 * k4[i] + B5 * k5[i] + B6 * k6[i]);
    f(t + h, y5, k7);

    double err = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const double e = h * (E1 * k1[i] + E3 * k3[i] + E4 * k4[i] + E5 * k5[i] +
                            E6 * k6[i] + E7 * k7[i]);
      const double sc = opts.abs_tol + opts.rel_tol * std::abs(y5[i]);
      err = std::max(err, std::abs(e) / sc);
    }
    if (err <= 1.0) {
      t += h;
      y = y5;
      k1 = k7;  // FSAL
      have_k1 = true;
    } else {
      have_k1 = false;
    }
    const double fac = std::clamp(0.9 * std::pow(std::max(err, 1e-10), -0.2), 0.2, 5.0);
    h *= fac;
    if (++steps > opts.max_steps) {
      throw IntegrationFailure("step budget exhausted");
    }
  }
  return steps;
}

}  // namespace

std::vector<double> PathSpec::velocity_at(double t) const {
  if (velocity) return (*velocity)(t);
  auto at = [&](double s) {
    if (closed) {
      s = s - std::floor(s);
    }
    return curve(s);
  };
  const double h = 1e-4;
  const auto p2 = at(t + 2 * h), p1 = at(t + h), m1 = at(t - h), m2 = at(t - 2 * h);
  std::vector<double> v(p1.coords.size());
  for (std::size_t i = 0; i < v.size(); ++i) {
    v[i] = (-p2.coords[i] + 8.0 * p1.coords[i] - 8.0 * m1.coords[i] + m2.coords[i]) /
           (12.0 * h);
  }
  return v;
}

TransportResult parallel_transport(const MetricPatch& patch, const PathSpec& path,
                                   const std::vector<std::vector<double>>& frame,
                                   const IntegrationOptions& opts) {
  const int m = patch.dim();
  const int nf = static_cast<int>(frame.size());
  std::vector<double> y(static_cast<std::size_t>(nf) * m);
  for (int a = 0; a < nf; ++a)
    for (int i = 0; i < m; ++i) y[static_cast<std::size_t>(a) * m + i] = frame[a][i];

  Rhs rhs = [&](double t, const std::vector<double>& state, std::vector<double>& dy) {
    ChartPoint p = path.curve(path.closed ? t - std::floor(t) : t);
    const Tensor3<double> gamma = christoffel_at(patch, p);
    const auto vel = path.velocity_at(t);
    for (int a = 0; a < nf; ++a) {
      for (int k = 0; k < m; ++k) {
        double s = 0.0;
        for (int i = 0; i < m; ++i) {
          if (vel[i] == 0.0) continue;
          for (int j = 0; j < m; ++j) {
            s += gamma(k, i, j) * vel[i] * state[static_cast<std::size_t>(a) * m + j];
          }
        }
        dy[static_cast<std::size_t>(a) * m + k] = -s;
      }
    }
  };

  TransportResult out;
  out.steps = integrate(rhs, y, 0.0, 1.0, opts);
  out.frame.assign(nf, std::vector<double>(m));
  for (int a = 0; a < nf; ++a)
    for (int i = 0; i < m; ++i) out.frame[a][i] = y[static_cast<std::size_t>(a) * m + i];
  return out;
}

FlowResult flow_with_jacobian(const VectorField& v, const std::vector<double>& start,
                              double tau, const IntegrationOptions& opts) {
  const int m = v.dim;
  // State: point followed by the Jacobian (row major).
  std::vector<double> y(static_cast<std::size_t>(m) + m * m, 0.0);
  for (int i = 0; i < m; ++i) {
    y[i] = start[i];
    y[m + static_cast<std::size_t>(i) * m + i] = 1.0;
  }
  const JetSpace& sp1 = JetSpace::get(m, 1);
  Rhs rhs = [&](double, const std::vector<double>& state, std::vector<double>& dy) {
    std::vector<double> x(state.begin(), state.begin() + m);
    auto vj = v.eval_jets(sp1, x);
    for (int i = 0; i < m; ++i) dy[i] = vj[i].value();
    // dJ/dtau = Dv J
    for (int i = 0; i < m; ++i)
      for (int j = 0; j < m; ++j) {
        double s = 0.0;
        for (int k = 0; k < m; ++k) {
          s += vj[i].d(k).value() * state[m + static_cast<std::size_t>(k) * m + j];
        }
        dy[m + static_cast<std::size_t>(i) * m + j] = s;
      }
  };
  FlowResult out;
  if (tau != 0.0) {
    out.steps = integrate(rhs, y, 0.0, tau, opts);
  }
  out.point.assign(y.begin(), y.begin() + m);
  out.jacobian = Mat<double>(m, 0.0);
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j)
      out.jacobian(i, j) = y[m + static_cast<std::size_t>(i) * m + j];
  return out;
}

}  // namespace pem
