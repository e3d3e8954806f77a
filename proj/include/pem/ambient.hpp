#pragma once

#include "pem/catalog.hpp"
#include "pem/cone.hpp"
#include "pem/curvature.hpp"
#include "pem/vector_field.hpp"

namespace pem {

// A rho-parametrized family of metrics g~(x, rho) on an n-manifold, with jets
// over the n+1 variables (x..., rho).
struct RhoFamily {
  int n = 0;
  Signature base_sig;
  std::function<void(JetVars vars, Mat<Jet>& out)> fn;  // out is n x n
  Domain domain;                                        // over (x..., rho)
};

// The family (1+mu rho)^2 g1 + (1-mu rho)^2 g2 with the excluded rho values
// required for nondegeneracy: none for mu = 0, {-1/mu} for m2 = 0, else
// {+-1/mu}.
RhoFamily product_rho_family(const EinsteinSpec& g1, const EinsteinSpec& g2,
                             double mu, double rho_max = 4.0);

// 2t dt drho + 2 rho dt^2 + t^2 g~(x, rho) on chart (x..., t, rho).
MetricPatch ambient_form_patch(const RhoFamily& fam, const std::string& chart_id,
                               double t_min = 0.05, double t_max = 4.0);

struct ProductAmbientSpec {
  EinsteinSpec g1, g2;
  MuSolution mu;
  RhoFamily family;
  MetricPatch ambient_patch;  // (x1..., x2..., t, rho)
  VectorField euler_field;    // t d/dt

  int n() const { return g1.m + g2.m; }
  int dim() const { return n() + 2; }
  int t_coord() const { return n(); }
  int rho_coord() const { return n() + 1; }
};

// The explicit Ricci-flat ambient metric over g1 x g2. Checks the mu
// constraints and carries the excluded-rho domain.
ProductAmbientSpec ambient_metric(const EinsteinSpec& g1, const EinsteinSpec& g2,
                                  const MuSolution& mu);

// The three component expressions whose vanishing makes the ambient-form
// metric Ricci flat, evaluated literally from the family jets:
//   ij:      rho g~'' - rho g~' g~^{-1} g~' + 1/2 rho tr(g~^{-1} g~') g~'
//            + (2-n)/2 g~' - 1/2 tr(g~^{-1} g~') g~ + Ric(g~)
//   rhorho:  -1/2 tr(g~^{-1} g~'') + 1/4 tr(g~^{-1} g~' g~^{-1} g~')
//   rhoj:    1/2 [ div^(rho)( g~^{-1} g~' )_j - d_j tr(g~^{-1} g~') ]
// (primes are d/drho; the covariant divergence uses the Levi-Civita
// connection of g~(., rho) at fixed rho). These must agree with the
// corresponding components of Ric(h) for the full normal-form metric.
struct RicciNormalForm {
  Mat<double> ric_ij;
  double ric_rhorho = 0.0;
  std::vector<double> ric_rhoj;
};

RicciNormalForm ricci_normal_form(const RhoFamily& fam, std::span<const double> x,
                                  double rho);

}  // namespace pem
