#include "pem/cone.hpp"

#include <cmath>

namespace pem {

MetricPatch warped_cone_patch(const MetricPatch& base, double A, double B,
                              double u_min, double u_max, const std::string& chart_id) {
  const int m = base.dim();
  MetricFn fn = [b = base, A, B, m](JetVars vars, Mat<Jet>& out) {
    const JetSpace& sp = vars[0].space();
    const Jet zero(sp, 0.0);
    for (int i = 0; i <= m; ++i)
      for (int j = 0; j <= m; ++j) out(i, j) = zero;
    const Jet u2A = vars[m] * vars[m] * A;
    if (m > 0) {
      Mat<Jet> g(m, zero);
      b.eval(vars.subspan(0, m), g);
      for (int i = 0; i < m; ++i)
        for (int j = 0; j < m; ++j) out(i, j) = u2A * g(i, j);
    }
    out(m, m) = Jet(sp, B);
  };
  Domain dom = base.domain();
  dom.box.push_back({u_min, u_max});
  Signature s = base.signature();
  if (A < 0) s = s.flipped();
  if (B > 0) {
    s.p += 1;
  } else {
    s.q += 1;
  }
  return MetricPatch(m + 1, s, chart_id, dom, fn, base.max_jet_order());
}

ConeSpec metric_cone(const EinsteinSpec& spec, double s_max) {
  if (spec.m < 1) throw BadDimension("metric cone needs a base of dimension >= 1");
  if (spec.sc.is_zero()) {
    throw RicciFlatBase("metric cone unavailable over a scalar-flat base");
  }
  // lambda with Sc = m(m-1) lambda; for m = 1 any nonzero lambda would do,
  // but m = 1 forces Sc = 0 and lands in the error above.
  const Rational lambda = spec.sc / (Rational(spec.m) * Rational(spec.m - 1));
  const int sgn = lambda.sign();
  const double A = sgn * lambda.value();
  const double B = sgn;
  MetricPatch patch = warped_cone_patch(spec.patch, A, B, 0.0, s_max,
                                        "cone(" + spec.label + ")");
  VectorField euler = coordinate_scaling_field(spec.m + 1, spec.m);
  return ConeSpec{spec, std::move(patch), lambda, sgn, std::move(euler)};
}

ConeProductSpec cone_product(const ConeSpec& c1, const ConeSpec& c2) {
  if (!(c1.lambda == -c2.lambda)) {
    throw LambdaMismatch("cone product needs lambda2 = -lambda1 (got " +
                         c1.lambda.str() + " and " + c2.lambda.str() + ")");
  }
  if (c1.lambda.sign() <= 0) {
    throw LambdaMismatch("cone product convention expects lambda > 0 on the first factor");
  }
  const int m1 = c1.base.m, m2 = c2.base.m;
  const int n = m1 + m2 + 2;
  const double lam = c1.lambda.value();

  MetricFn fn = [b1 = c1.base.patch, b2 = c2.base.patch, m1, m2, lam, n](
                    JetVars vars, Mat<Jet>& out) {
    const JetSpace& sp = vars[0].space();
    const Jet zero(sp, 0.0);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) out(i, j) = zero;
    const Jet s1 = vars[m1 + m2];
    const Jet s2 = vars[m1 + m2 + 1];
    if (m1 > 0) {
      Mat<Jet> g1(m1, zero);
      b1.eval(vars.subspan(0, m1), g1);
      const Jet w1 = s1 * s1 * lam;
      for (int i = 0; i < m1; ++i)
        for (int j = 0; j < m1; ++j) out(i, j) = w1 * g1(i, j);
    }
    if (m2 > 0) {
      Mat<Jet> g2(m2, zero);
      b2.eval(vars.subspan(m1, m2), g2);
      const Jet w2 = s2 * s2 * lam;
      for (int i = 0; i < m2; ++i)
        for (int j = 0; j < m2; ++j) out(m1 + i, m1 + j) = w2 * g2(i, j);
    }
    out(m1 + m2, m1 + m2) = Jet(sp, 1.0);
    out(m1 + m2 + 1, m1 + m2 + 1) = Jet(sp, -1.0);
  };

  Domain dom = Domain::product(c1.base.patch.domain(), c2.base.patch.domain());
  dom.box.push_back(c1.cone_patch.domain().box.back());
  dom.box.push_back(c2.cone_patch.domain().box.back());
  Signature sb1 = c1.base.patch.signature(), sb2 = c2.base.patch.signature();
  Signature sig{sb1.p + sb2.p + 1, sb1.q + sb2.q + 1};

  MetricPatch patch(n, sig, "cone(" + c1.base.label + ")*cone(" + c2.base.label + ")",
                    dom, fn,
                    std::min(c1.base.patch.max_jet_order(), c2.base.patch.max_jet_order()));
  VectorField euler = field_sum(coordinate_scaling_field(n, m1 + m2),
                                coordinate_scaling_field(n, m1 + m2 + 1));
  return ConeProductSpec{c1, c2, std::move(patch), c1.lambda, std::move(euler)};
}

std::pair<double, double> cone_coords_to_trho(double s1, double s2, double lambda) {
  if (s1 <= 0.0 || s2 <= 0.0) throw OutOfDomain("cone coordinates need s1, s2 > 0");
  if (lambda <= 0.0) throw LambdaMismatch("coordinate change needs lambda > 0");
  const double t = std::sqrt(lambda) * (s1 + s2) / 2.0;
  const double rho = 2.0 * (s1 - s2) / (lambda * (s1 + s2));
  return {t, rho};
}

std::pair<double, double> cone_coords_to_s(double t, double rho, double lambda) {
  if (lambda <= 0.0) throw LambdaMismatch("coordinate change needs lambda > 0");
  const double mu = lambda / 2.0;
  if (t <= 0.0 || 1.0 + mu * rho <= 0.0 || 1.0 - mu * rho <= 0.0) {
    throw OutOfDomain("inverse cone coordinates need t > 0 and 1 +/- mu rho > 0");
  }
  const double f = t / std::sqrt(2.0 * mu);
  return {f * (1.0 + mu * rho), f * (1.0 - mu * rho)};
}

}  // namespace pem
