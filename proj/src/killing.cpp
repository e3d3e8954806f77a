#include "pem/killing.hpp"

#include <cmath>

namespace pem {

KillingFormSpec special_killing_form(const PoincareSpec& p) {
  const double mu = p.mu.value();
  if (mu <= 0.0) {
    throw BadMu("special Killing form needs mu > 0; swap the factor roles first");
  }
  if (!p.g1.patch.oriented()) {
    throw OrientationUnset("special Killing form needs an oriented first factor");
  }
  const int m1 = p.g1.m;
  const int m2 = p.g2.m;
  const int dim = p.dim();
  const int rc = p.r_coord();

  // psi = (mu r/2 - 1/r)^{m1+1} * sqrt|det g1| dx_1^1 ^ ... ^ dx_1^{m1}
  FormField psi{dim, m1,
                [g1 = p.g1.patch, m1, mu, rc, dim](JetVars vars, std::span<Jet> out) {
                  const JetSpace& sp = vars[0].space();
                  for (auto& j : out) j = Jet(sp, 0.0);
                  const Jet& r = vars[rc];
                  const Jet factor =
                      pow_int(r * (mu / 2.0) - recip(r), m1 + 1);
                  Jet vol(sp, 1.0);
                  if (m1 > 0) {
                    Mat<Jet> g(m1, Jet(sp, 0.0));
                    g1.eval(vars.subspan(0, m1), g);
                    Jet det = matrix_determinant(g, Jet(sp, 1.0));
                    if (det.value() < 0.0) det = -det;
                    vol = sqrt(det);
                  }
                  // component on the leading increasing tuple (0,...,m1-1)
                  out[0] = factor * vol;
                }};

  // gamma = (h2/h1) dr / r
  FormField gamma{dim, 1, [mu, rc](JetVars vars, std::span<Jet> out) {
                    const JetSpace& sp = vars[0].space();
                    for (auto& j : out) j = Jet(sp, 0.0);
                    const Jet& r = vars[rc];
                    const Jet h1 = r * (mu / 2.0) - recip(r);
                    const Jet h2 = r * (mu / 2.0) + recip(r);
                    out[rc] = h2 / (h1 * r);
                  }};

  KillingFormSpec out;
  out.psi = std::move(psi);
  out.gamma = std::move(gamma);
  out.p = m1;
  out.mu = mu;
  out.killing_constant = m1 + 1;
  out.h1 = [mu](double r) { return mu * r / 2.0 - 1.0 / r; };
  out.h2 = [mu](double r) { return mu * r / 2.0 + 1.0 / r; };
  out.r_sharp = [mu](double r) { return 1.0 / std::abs(mu * r / 2.0 - 1.0 / r); };
  out.source = p;
  (void)m2;
  return out;
}

FormField extend_form(const FormField& a, int new_dim) {
  if (new_dim < a.dim) throw DegreeMismatch("extend_form target dimension too small");
  const int old_dim = a.dim;
  const int p = a.degree;
  return {new_dim, p, [a, old_dim, p, new_dim](JetVars vars, std::span<Jet> out) {
            const auto& ob = FormBasis::get(new_dim, p);
            const auto& ib = FormBasis::get(old_dim, p);
            std::vector<Jet> comps(ib.size(), Jet(vars[0].space(), 0.0));
            a.fn(vars.subspan(0, old_dim), comps);
            for (int oi = 0; oi < ob.size(); ++oi) {
              auto T = ob.tuple(oi);
              const bool inside = std::all_of(T.begin(), T.end(),
                                              [&](int v) { return v < old_dim; });
              if (inside) {
                std::vector<int> t(T.begin(), T.end());
                out[oi] = comps[ib.index_of(t)];
              } else {
                out[oi] = Jet(vars[0].space(), 0.0);
              }
            }
          }};
}

KillingResiduals special_killing_residuals(const MetricPatch& patch,
                                           const FormField& phi, double c,
                                           std::span<const double> Y,
                                           const ChartPoint& x) {
  const int p = phi.degree;
  FormField dphi = exterior_d(phi);

  KillingResiduals out;
  // a: grad_Y phi - iota_Y d phi / (p+1)
  {
    auto grad = covariant_derivative(patch, phi, Y, x);
    VectorField Yf{patch.dim(), [yv = std::vector<double>(Y.begin(), Y.end())](
                                    JetVars vars, std::span<Jet> o) {
                     for (std::size_t i = 0; i < o.size(); ++i)
                       o[i] = Jet(vars[0].space(), yv[i]);
                   }};
    auto iota = interior_product(Yf, dphi).eval(x.coords);
    for (std::size_t i = 0; i < grad.size(); ++i) {
      out.killing = std::max(out.killing, std::abs(grad[i] - iota[i] / (p + 1)));
    }
  }
  // b: grad_Y d phi - c g(Y,.) ^ phi
  {
    auto grad = covariant_derivative(patch, dphi, Y, x);
    auto m = metric_eval(patch, x);
    const int dim = patch.dim();
    FormField ylow{dim, 1, [m, Y = std::vector<double>(Y.begin(), Y.end()), dim](
                               JetVars vars, std::span<Jet> o) {
                     for (int j = 0; j < dim; ++j) {
                       double s = 0.0;
                       for (int k = 0; k < dim; ++k) s += m.g(j, k) * Y[k];
                       o[j] = Jet(vars[0].space(), s);
                     }
                   }};
    auto wedge_val = wedge(ylow, phi).eval(x.coords);
    for (std::size_t i = 0; i < grad.size(); ++i) {
      out.second = std::max(out.second, std::abs(grad[i] - c * wedge_val[i]));
    }
  }
  return out;
}

ConeLift killing_cone_lift(const FormField& phi, const MetricPatch& base, double c,
                           const std::vector<ChartPoint>& probes, double probe_tol) {
  if (c == 0.0) throw BadMu("killing constant must be nonzero");
  const int p = phi.degree;
  const int dim = base.dim();

  for (const auto& q : probes) {
    std::vector<double> Y(dim, 0.0);
    double worst = 0.0;
    for (int k = 0; k < dim; ++k) {
      std::fill(Y.begin(), Y.end(), 0.0);
      Y[k] = 1.0;
      auto res = special_killing_residuals(base, phi, c, Y, q);
      worst = std::max(worst, std::max(res.killing, res.second));
    }
    if (worst > probe_tol) {
      throw NotSpecialKilling("defining-equation residual " + std::to_string(worst) +
                              " above " + std::to_string(probe_tol));
    }
  }

  const double sgn_c = c > 0 ? 1.0 : -1.0;
  const double A = sgn_c * c / (p + 1);
  const double B = -sgn_c;
  MetricPatch cone = warped_cone_patch(base, A, B, 0.05, 4.0,
                                       "killing_cone(" + base.chart_id() + ")");

  FormField phi_ext = extend_form(phi, dim + 1);
  FormField du = coordinate_form(dim + 1, {dim});
  FormField term1 = scale_form(wedge(du, phi_ext), [dim, p](JetVars vars) {
    return pow_int(vars[dim], p);
  });
  FormField term2 = scale_form(exterior_d(phi_ext), [dim, p](JetVars vars) {
    return pow_int(vars[dim], p + 1) * (1.0 / (p + 1));
  });
  FormField lifted = form_sum(term1, term2);
  return ConeLift{std::move(cone), std::move(lifted)};
}

}  // namespace pem
