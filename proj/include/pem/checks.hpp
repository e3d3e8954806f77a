#pragma once

#include "pem/ambient.hpp"
#include "pem/cone.hpp"
#include "pem/killing.hpp"
#include "pem/poincare.hpp"
#include "pem/report.hpp"
#include "pem/sample.hpp"
#include "pem/transport.hpp"

namespace pem {

// How pointwise matrix residuals are measured. Poincare interiors use the
// metric operator norm (entries of g^{-1} R), which stays scale invariant
// where r^{-2} blows raw components up.
enum class ResidualNorm { component, metric_operator };

// Worker count for per-sample parallel evaluation; reads EF_THREADS, which
// caps but never changes results (samples own their seed streams).
int worker_count();

// Ric(g) = Lambda g within tol at the sampled points.
CheckReport check_einstein(const MetricPatch& patch, double lambda,
                           const SamplePlan& plan, double tol,
                           ResidualNorm norm = ResidualNorm::component,
                           JetMode mode = JetMode::analytic,
                           const std::string& name = "einstein");

// Full Riemann tensor vanishes.
CheckReport check_flatness(const MetricPatch& patch, const SamplePlan& plan,
                           double tol, const std::string& name = "flatness");

// The three ambient conditions, one report each:
//   <name>-homothety: L_X h = 2h for the dilation field X = t d/dt
//   <name>-boundary:  h restricted to rho = 0 boundary directions is the
//                     tautological form t^2 (g1 x g2)
//   <name>-ricciflat: Ric(h) = 0
std::vector<CheckReport> check_ambient_conditions(const ProductAmbientSpec& amb,
                                                  const SamplePlan& plan, double tol,
                                                  const std::string& name = "ambient");

// Componentwise equality of the cone product pulled through the coordinate
// change with the ambient normal form.
CheckReport check_coordinate_equivalence(const ConeProductSpec& cp,
                                         const ProductAmbientSpec& amb,
                                         const SamplePlan& plan, double tol);

// Round trip of the cone coordinate change on seeded (s1, s2) points.
CheckReport check_coord_roundtrip(double lambda, const SamplePlan& plan, double tol);

// L_V g = alpha g together with closedness of g(V,.) (gradient criterion).
CheckReport check_homothety_gradient(const MetricPatch& patch, const VectorField& V,
                                     double alpha, const SamplePlan& plan, double tol,
                                     const std::string& name = "homothety-gradient");

// Ambient metrics built from (g1, g2) and (alpha g1, alpha g2) agree
// componentwise under (t, rho) -> (t/sqrt(alpha), alpha rho).
CheckReport check_dilation_invariance(const EinsteinSpec& g1, const EinsteinSpec& g2,
                                      double alpha, const SamplePlan& plan, double tol);

// Residuals (a)-(e) for the special Killing form; the report's residual is
// their maximum and the notes carry the pieces.
CheckReport check_special_killing(const KillingFormSpec& k, const SamplePlan& plan,
                                  double tol);

// Bach tensor vanishes on a 4-dimensional patch.
CheckReport check_bach_vanishing(const MetricPatch& patch, const SamplePlan& plan,
                                 double tol, const std::string& name = "bach");

// Transport probe: a homothetic gradient field with constant c, a transverse
// level set {x_k = value}, and a closed loop.
struct TransportProbe {
  VectorField v;
  double c = 2.0;
  int scaling_coord = -1;  // >= 0: v = x_k d/dx_k with exact flow
  int transverse_coord = 0;
  double transverse_value = 1.0;
  PathSpec loop;
};

// Parallel transport along the flow against homothetic dragging:
// F(s) = (1 - (c/2)s) dPhi_s(F), with the flow parametrized so that
// v(s) = 1 - (c/2)s (s = 0 at the start point).
CheckReport check_drag_lemma(const MetricPatch& patch, const TransportProbe& probe,
                             int t_grid, int s_grid, double s_max, double tol);

// Frame transport around the loop against transport around its projection
// onto the transverse hypersurface along flow lines.
CheckReport check_transverse_holonomy(const MetricPatch& patch,
                                      const TransportProbe& probe, double tol);

// Transport of a coordinate frame around a closed loop returns it unchanged
// on flat patches.
CheckReport check_loop_identity(const MetricPatch& patch, const PathSpec& loop,
                                double tol, const std::string& name = "loop-identity");

// Rank of the span of curvature endomorphisms transported to a base point; a
// lower bound for the holonomy algebra dimension.
int holonomy_algebra_estimate(const MetricPatch& patch, const ChartPoint& base,
                              const SamplePlan& plan);

// ricci_normal_form against the kernel curvature of the normal-form patch;
// notes carry the largest normal-form component (nonzero for mismatched mu).
CheckReport check_normal_form_agreement(const RhoFamily& fam, const SamplePlan& plan,
                                        double tol,
                                        const std::string& name = "normal-form");

}  // namespace pem
