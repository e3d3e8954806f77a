#pragma once

#include "pem/forms.hpp"
#include "pem/poincare.hpp"

namespace pem {

// The m1-form psi = (mu r/2 - 1/r)^{m1+1} vol(g1) on the Poincare interior,
// with its companion 1-form gamma = (h2/h1) dr/r, warping functions
// h1 = mu r/2 - 1/r, h2 = mu r/2 + 1/r and defining function
// r_# = (|psi|^2)^{-1/2} = 1/|h1|.
struct KillingFormSpec {
  FormField psi;
  FormField gamma;
  int p = 0;                      // form degree m1
  double mu = 0.0;
  double killing_constant = 0.0;  // m1 + 1
  std::function<double(double)> h1, h2, r_sharp;
  PoincareSpec source;
};

KillingFormSpec special_killing_form(const PoincareSpec& p);

// Extend a form on an m-chart to the (m+1)-chart with an appended coordinate
// (components involving the new index vanish).
FormField extend_form(const FormField& a, int new_dim);

// phi~ = u^p du ^ phi + u^{p+1}/(p+1) d phi on the cone
// -sgn(c)( (-c u^2/(p+1)) g + du^2 ) over `base`; parallel when phi is
// special Killing with constant c. When probe points are supplied, the
// defining equations are verified there first.
struct ConeLift {
  MetricPatch cone;  // (x..., u)
  FormField lifted;  // degree p+1
};

ConeLift killing_cone_lift(const FormField& phi, const MetricPatch& base, double c,
                           const std::vector<ChartPoint>& probes = {},
                           double probe_tol = 1e-5);

// Residual of the two special-Killing equations at a point, for direction Y:
//   a: grad_Y phi - iota_Y d phi / (p+1)
//   b: grad_Y d phi - c g(Y,.) ^ phi
struct KillingResiduals {
  double killing = 0.0;
  double second = 0.0;
};

KillingResiduals special_killing_residuals(const MetricPatch& patch,
                                           const FormField& phi, double c,
                                           std::span<const double> Y,
                                           const ChartPoint& x);

}  // namespace pem
