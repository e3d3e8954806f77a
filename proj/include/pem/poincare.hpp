#pragma once

#include "pem/ambient.hpp"

namespace pem {

// g^{1,2} = r^{-2}( dr^2 + (1 - mu r^2/2)^2 g1 + (1 + mu r^2/2)^2 g2 ) on
// chart (x1..., x2..., r), r > 0, satisfying Ric = -(m1+m2) g^{1,2}. The
// interval keeps the constructed excluded radius sqrt(2/|mu|) where the
// corresponding warp factor vanishes.
struct PoincareSpec {
  EinsteinSpec g1, g2;
  MuSolution mu;
  MetricPatch interior_patch;
  MetricPatch boundary_patch;  // g1 x g2 on the boundary chart
  RhoFamily family;
  std::optional<double> excluded_r;

  int n() const { return g1.m + g2.m; }
  int dim() const { return n() + 1; }
  int r_coord() const { return n(); }
};

PoincareSpec poincare_metric(const EinsteinSpec& g1, const EinsteinSpec& g2,
                             const MuSolution& mu, double r_max = 3.8);

// Swap the factor roles when mu < 0 (negating mu leaves the metric unchanged).
PoincareSpec normalized_positive_mu(const EinsteinSpec& g1, const EinsteinSpec& g2,
                                    const MuSolution& mu, double r_max = 3.8);

// The recursion G^s = r_s^{-2}( dr_s^2 + (1 + r_s^2/4)^2 G^{s-1}
//                                      + (1 - r_s^2/4)^2 g_s ), mu = -1/2,
// over g0 with Sc = -m0(m0-1) and positively curved g1..gl with
// Sc_i = m_i(m_i-1). Every stage is Poincare-Einstein.
struct MultiSubProductSpec {
  EinsteinSpec g0;
  std::vector<EinsteinSpec> positives;
  std::vector<PoincareSpec> stages;       // stage s-1 holds G^s
  std::vector<EinsteinSpec> stage_specs;  // G^s wrapped with its constants

  int levels() const { return static_cast<int>(stages.size()); }
};

MultiSubProductSpec multi_subproduct(const EinsteinSpec& g0,
                                     const std::vector<EinsteinSpec>& positives);

// The cone h = u^2 g+ - du^2 over the interior, on chart (x..., r, u), plus
// the same metric re-expressed in (x..., t, rho) through rho = -r^2/2,
// t = u/r. The re-expression matches the product ambient metric on rho < 0.
struct AmbientFromPoincare {
  MetricPatch cone;         // (x..., r, u)
  MetricPatch normal_form;  // (x..., t, rho), rho < 0
  VectorField cone_euler;   // u d/du

  int u_coord() const { return cone.dim() - 1; }
};

AmbientFromPoincare ambient_from_poincare(const PoincareSpec& p);

}  // namespace pem
