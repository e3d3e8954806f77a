#pragma once

#include "pem/catalog.hpp"
#include "pem/vector_field.hpp"

namespace pem {

// The metric cone sgn(lambda)(lambda s^2 g + ds^2) over an Einstein base with
// Sc = m(m-1) lambda, on chart (x..., s) with s in (0, s_max). Ricci-flat for
// every base dimension m >= 1.
struct ConeSpec {
  EinsteinSpec base;
  MetricPatch cone_patch;
  Rational lambda;
  int sgn = 1;
  VectorField euler_field;  // s d/ds

  int dim() const { return base.m + 1; }
  int s_coord() const { return base.m; }
};

ConeSpec metric_cone(const EinsteinSpec& spec, double s_max = 4.0);

// Product of two cones built to the common-lambda pair convention
// (lambda = 2 mu > 0 on the first factor, -lambda on the second, so the
// second cone carries -ds^2). Chart order (x1..., x2..., s1, s2).
struct ConeProductSpec {
  ConeSpec cone1, cone2;
  MetricPatch product_patch;
  Rational lambda;
  VectorField euler_field;  // s1 d/ds1 + s2 d/ds2

  int dim() const { return cone1.base.m + cone2.base.m + 2; }
  int s1_coord() const { return cone1.base.m + cone2.base.m; }
  int s2_coord() const { return cone1.base.m + cone2.base.m + 1; }
};

ConeProductSpec cone_product(const ConeSpec& c1, const ConeSpec& c2);

// t = sqrt(lambda)(s1+s2)/2, rho = 2(s1-s2)/(lambda(s1+s2)); mu = lambda/2.
std::pair<double, double> cone_coords_to_trho(double s1, double s2, double lambda);
// s1 = (2mu)^{-1/2} t (1+mu rho), s2 = (2mu)^{-1/2} t (1-mu rho).
std::pair<double, double> cone_coords_to_s(double t, double rho, double lambda);

// General warped cone A u^2 g + B du^2 over an arbitrary patch, coordinate u
// appended last. Used by the metric cone, the cone over a Poincare interior
// and the special-Killing lift cone.
MetricPatch warped_cone_patch(const MetricPatch& base, double A, double B,
                              double u_min, double u_max, const std::string& chart_id);

}  // namespace pem
