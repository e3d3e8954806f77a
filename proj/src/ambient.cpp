#include "pem/ambient.hpp"

#include <cmath>

namespace pem {

RhoFamily product_rho_family(const EinsteinSpec& g1, const EinsteinSpec& g2,
                             double mu, double rho_max) {
  const int m1 = g1.m, m2 = g2.m;
  const int n = m1 + m2;
  if (n < 1) throw BadDimension("rho-family needs at least one boundary dimension");

  auto fn = [p1 = g1.patch, p2 = g2.patch, m1, m2, mu, n](JetVars vars, Mat<Jet>& out) {
    const JetSpace& sp = vars[0].space();
    const Jet zero(sp, 0.0);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) out(i, j) = zero;
    const Jet& rho = vars[n];
    if (m1 > 0) {
      Mat<Jet> b(m1, zero);
      p1.eval(vars.subspan(0, m1), b);
      const Jet wa = pow_int(1.0 + rho * mu, 2);
      for (int i = 0; i < m1; ++i)
        for (int j = 0; j < m1; ++j) out(i, j) = wa * b(i, j);
    }
    if (m2 > 0) {
      Mat<Jet> b(m2, zero);
      p2.eval(vars.subspan(m1, m2), b);
      const Jet wb = pow_int(1.0 - rho * mu, 2);
      for (int i = 0; i < m2; ++i)
        for (int j = 0; j < m2; ++j) out(m1 + i, m1 + j) = wb * b(i, j);
    }
  };

  Domain dom = (m2 == 0) ? g1.patch.domain()
                         : Domain::product(g1.patch.domain(), g2.patch.domain());
  dom.box.push_back({-rho_max, rho_max});
  const int rho_coord = n;
  if (mu != 0.0) {
    dom.excluded.push_back({rho_coord, -1.0 / mu, "-1/mu"});
    if (m2 >= 1) dom.excluded.push_back({rho_coord, 1.0 / mu, "1/mu"});
  }

  Signature s1 = g1.patch.signature(), s2 = g2.patch.signature();
  return RhoFamily{n, Signature{s1.p + s2.p, s1.q + s2.q}, std::move(fn), std::move(dom)};
}

MetricPatch ambient_form_patch(const RhoFamily& fam, const std::string& chart_id,
                               double t_min, double t_max) {
  const int n = fam.n;
  MetricFn fn = [f = fam.fn, n](JetVars vars, Mat<Jet>& out) {
    const JetSpace& sp = vars[0].space();
    const Jet zero(sp, 0.0);
    const int dim = n + 2;
    for (int i = 0; i < dim; ++i)
      for (int j = 0; j < dim; ++j) out(i, j) = zero;
    const Jet& t = vars[n];
    const Jet& rho = vars[n + 1];
    // family variables are (x..., rho)
    std::vector<Jet> fvars(vars.begin(), vars.begin() + n);
    fvars.push_back(rho);
    Mat<Jet> g(n, zero);
    f(fvars, g);
    const Jet t2 = t * t;
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) out(i, j) = t2 * g(i, j);
    out(n, n) = rho * 2.0;       // 2 rho dt^2
    out(n, n + 1) = t;           // 2t dt drho
    out(n + 1, n) = t;
  };

  // domain: x-box, then t, then rho (exclusions shift past the t slot)
  Domain dom;
  for (int i = 0; i < n; ++i) dom.box.push_back(fam.domain.box[i]);
  dom.box.push_back({t_min, t_max});
  dom.box.push_back(fam.domain.box[n]);
  for (auto e : fam.domain.excluded) {
    if (e.coord == n) e.coord = n + 1;
    dom.excluded.push_back(e);
  }

  Signature sig{fam.base_sig.p + 1, fam.base_sig.q + 1};
  return MetricPatch(n + 2, sig, chart_id, dom, fn, 4);
}

ProductAmbientSpec ambient_metric(const EinsteinSpec& g1, const EinsteinSpec& g2,
                                  const MuSolution& mu) {
  // revalidate the constraints against this mu
  if (!mu.free) {
    if (g1.m >= 2 &&
        !(Rational(2) * Rational(g1.m) * Rational(g1.m - 1) * mu.mu == g1.sc)) {
      throw IncompatibleScalars("mu does not satisfy 2 m1(m1-1) mu = Sc(g1)");
    }
    if (g2.m >= 2 &&
        !(Rational(2) * Rational(g2.m) * Rational(g2.m - 1) * mu.mu == -g2.sc)) {
      throw IncompatibleScalars("mu does not satisfy 2 m2(m2-1) mu = -Sc(g2)");
    }
  }
  RhoFamily fam = product_rho_family(g1, g2, mu.value());
  MetricPatch patch = ambient_form_patch(
      fam, "ambient(" + g1.label + "," + g2.label + ")");
  VectorField euler = coordinate_scaling_field(patch.dim(), g1.m + g2.m);
  return ProductAmbientSpec{g1, g2, mu, std::move(fam), std::move(patch),
                            std::move(euler)};
}

RicciNormalForm ricci_normal_form(const RhoFamily& fam, std::span<const double> x,
                                  double rho) {
  const int n = fam.n;
  std::vector<double> coords(x.begin(), x.end());
  coords.push_back(rho);
  if (!fam.domain.contains(coords)) {
    throw OutOfDomain("ricci_normal_form point outside the family domain");
  }
  const JetSpace& sp = JetSpace::get(n + 1, 2);
  auto vars = seed_variables(sp, coords);
  Mat<Jet> G(n, Jet(sp, 0.0));
  fam.fn(vars, G);

  const Jet z2(sp, 0.0);
  Mat<Jet> Ginv = matrix_inverse(G, z2, Jet(sp, 1.0), 1e-14);
  const int rc = n;  // rho variable index
  const Jet z1(JetSpace::get(n + 1, 1), 0.0);
  Mat<Jet> Gp(n, z1);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) Gp(i, j) = G(i, j).d(rc);

  // trace of g~^{-1} g~'
  Jet tr = z1;
  for (int k = 0; k < n; ++k)
    for (int l = 0; l < n; ++l) tr += Ginv(k, l) * Gp(k, l);

  std::vector<int> dirs(n);
  for (int i = 0; i < n; ++i) dirs[i] = i;
  JetCurvature jc = curvature_from_jets(G, dirs);

  RicciNormalForm out;
  out.ric_ij = Mat<double>(n, 0.0);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      double v = rho * Gp(i, j).d(rc).value();
      double q = 0.0;
      for (int k = 0; k < n; ++k)
        for (int l = 0; l < n; ++l)
          q += Ginv(k, l).value() * Gp(i, k).value() * Gp(j, l).value();
      v -= rho * q;
      v += 0.5 * rho * tr.value() * Gp(i, j).value();
      v += 0.5 * (2.0 - n) * Gp(i, j).value();
      v -= 0.5 * tr.value() * G(i, j).value();
      v += jc.ricci(i, j).value();
      out.ric_ij(i, j) = v;
    }

  double rr = 0.0;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) rr += -0.5 * Ginv(i, j).value() * Gp(i, j).d(rc).value();
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k)
        for (int l = 0; l < n; ++l)
          rr += 0.25 * Ginv(i, j).value() * Ginv(k, l).value() * Gp(i, k).value() *
                Gp(j, l).value();
  out.ric_rhorho = rr;

  // T^l_j = g~^{lk} g~'_{kj} as order-1 jets
  Mat<Jet> T(n, z1);
  for (int l = 0; l < n; ++l)
    for (int j = 0; j < n; ++j) {
      Jet s = z1;
      for (int k = 0; k < n; ++k) s += Ginv(l, k) * Gp(k, j);
      T(l, j) = s;
    }
  out.ric_rhoj.assign(n, 0.0);
  for (int j = 0; j < n; ++j) {
    double div = 0.0;
    for (int l = 0; l < n; ++l) {
      double v = T(l, j).d(l).value();
      for (int e = 0; e < n; ++e) {
        v += jc.christoffel(l, l, e).value() * T(e, j).value() -
             jc.christoffel(e, l, j).value() * T(l, e).value();
      }
      div += v;
    }
    out.ric_rhoj[j] = 0.5 * (div - tr.d(j).value());
  }
  return out;
}

}  // namespace pem
