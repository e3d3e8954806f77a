#include "pem/poincare.hpp"

#include <cmath>

namespace pem {

PoincareSpec poincare_metric(const EinsteinSpec& g1, const EinsteinSpec& g2,
                             const MuSolution& mu, double r_max) {
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
  const int n = g1.m + g2.m;
  const double muv = mu.value();
  RhoFamily fam = product_rho_family(g1, g2, muv);

  MetricFn fn = [f = fam.fn, n](JetVars vars, Mat<Jet>& out) {
    const JetSpace& sp = vars[0].space();
    const Jet zero(sp, 0.0);
    const int dim = n + 1;
    for (int i = 0; i < dim; ++i)
      for (int j = 0; j < dim; ++j) out(i, j) = zero;
    const Jet& r = vars[n];
    const Jet rho = r * r * (-0.5);
    std::vector<Jet> fvars(vars.begin(), vars.begin() + n);
    fvars.push_back(rho);
    Mat<Jet> g(n, zero);
    f(fvars, g);
    const Jet inv_r2 = recip(r * r);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) out(i, j) = inv_r2 * g(i, j);
    out(n, n) = inv_r2;
  };

  Domain dom;
  for (int i = 0; i < n; ++i) dom.box.push_back(fam.domain.box[i]);
  dom.box.push_back({0.0, r_max});

  // Excluded radius per the interval table: sqrt(2/mu) when mu > 0 and
  // m2 = 0; sqrt(2/|mu|) when mu != 0 and m2 >= 1; nothing otherwise.
  std::optional<double> excluded_r;
  if (muv > 0.0 || (muv != 0.0 && g2.m >= 1)) {
    excluded_r = std::sqrt(2.0 / std::abs(muv));
    if (*excluded_r < r_max) {
      dom.excluded.push_back({n, *excluded_r, "sqrt(2/|mu|)"});
    }
  }

  Signature sig{fam.base_sig.p + 1, fam.base_sig.q};
  MetricPatch interior(n + 1, sig,
                       "poincare(" + g1.label + "," + g2.label + ")", dom, fn, 4);
  MetricPatch boundary = product_metric(g1, g2);
  return PoincareSpec{g1,       g2,       mu, std::move(interior),
                      std::move(boundary), std::move(fam), excluded_r};
}

PoincareSpec normalized_positive_mu(const EinsteinSpec& g1, const EinsteinSpec& g2,
                                    const MuSolution& mu, double r_max) {
  if (mu.value() < 0.0) {
    MuSolution swapped = mu;
    swapped.mu = -mu.mu;
    return poincare_metric(g2, g1, swapped, r_max);
  }
  return poincare_metric(g1, g2, mu, r_max);
}

MultiSubProductSpec multi_subproduct(const EinsteinSpec& g0,
                                     const std::vector<EinsteinSpec>& positives) {
  if (positives.empty()) throw BadDimension("recursion needs at least one stage");
  const double sc0 = -static_cast<double>(g0.m) * (g0.m - 1);
  if (std::abs(g0.sc_value() - sc0) > 1e-9) {
    throw BadNormalization("Sc(g0) must equal -m0(m0-1), got " + g0.sc.str());
  }
  for (const auto& gi : positives) {
    const double want = static_cast<double>(gi.m) * (gi.m - 1);
    if (std::abs(gi.sc_value() - want) > 1e-9) {
      throw BadNormalization("Sc(" + gi.label + ") must equal m(m-1), got " +
                             gi.sc.str());
    }
  }

  MultiSubProductSpec out{g0, positives, {}, {}};
  EinsteinSpec current = g0;
  const MuSolution mu{Rational(-1, 2), false, true};
  for (std::size_t s = 0; s < positives.size(); ++s) {
    // I_s = [0, 2); the degenerate radius sqrt(2/|mu|) = 2 is its endpoint.
    PoincareSpec stage = poincare_metric(current, positives[s], mu, 2.0);
    const int d = stage.dim();
    EinsteinSpec wrapped{stage.interior_patch, d,
                         Rational(-d) * Rational(d - 1), Rational(-1),
                         "G^" + std::to_string(s + 1)};
    wrapped.lambda = Rational(-1);
    out.stages.push_back(std::move(stage));
    out.stage_specs.push_back(wrapped);
    current = out.stage_specs.back();
  }
  return out;
}

AmbientFromPoincare ambient_from_poincare(const PoincareSpec& p) {
  const int n1 = p.dim();  // interior dimension n+1
  MetricPatch cone = warped_cone_patch(p.interior_patch, 1.0, -1.0, 0.05, 4.0,
                                       "cone_over(" + p.interior_patch.chart_id() + ")");

  // (x, t, rho) -> (x, r = sqrt(-2 rho), u = t r), rho < 0.
  const int n = p.n();
  CoordMapFn map = [n](JetVars vars) {
    std::vector<Jet> old(vars.begin(), vars.begin() + n);
    const Jet& t = vars[n];
    const Jet& rho = vars[n + 1];
    const Jet r = sqrt(rho * (-2.0));
    old.push_back(r);
    old.push_back(t * r);
    return old;
  };

  Domain dom;
  const auto& ibox = p.interior_patch.domain().box;
  for (int i = 0; i < n; ++i) dom.box.push_back(ibox[i]);
  dom.box.push_back({0.05, 4.0});  // t
  const double r_hi = ibox[n].second;
  dom.box.push_back({-0.5 * r_hi * r_hi, 0.0});  // rho < 0
  if (p.excluded_r && *p.excluded_r < r_hi) {
    dom.excluded.push_back(
        {n + 1, -0.5 * (*p.excluded_r) * (*p.excluded_r), "-r_excl^2/2"});
  }

  Signature cs = cone.signature();
  MetricPatch normal = pullback_metric(cone, map, n + 2, cs, dom,
                                       "ambient_over(" + p.interior_patch.chart_id() +
                                           ")");
  VectorField euler = coordinate_scaling_field(n1 + 1, n1);
  return AmbientFromPoincare{std::move(cone), std::move(normal), std::move(euler)};
}

}  // namespace pem
