#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include "pem/metric.hpp"

namespace pem {

// Exact rational arithmetic for the scalar-curvature bookkeeping. Every
// double is a dyadic rational, so conversions from user input are exact.
class Rational {
public:
  Rational() : num_(0), den_(1) {}
  Rational(std::int64_t n) : num_(n), den_(1) {}
  Rational(std::int64_t n, std::int64_t d);
  static Rational from_double(double x);

  std::int64_t num() const { return num_; }
  std::int64_t den() const { return den_; }
  double value() const { return static_cast<double>(num_) / static_cast<double>(den_); }
  bool is_zero() const { return num_ == 0; }
  int sign() const { return num_ > 0 ? 1 : (num_ < 0 ? -1 : 0); }
  Rational abs() const { return num_ < 0 ? Rational(-num_, den_) : *this; }

  friend Rational operator+(const Rational& a, const Rational& b);
  friend Rational operator-(const Rational& a, const Rational& b);
  friend Rational operator*(const Rational& a, const Rational& b);
  friend Rational operator/(const Rational& a, const Rational& b);
  friend Rational operator-(const Rational& a) { return {-a.num_, a.den_}; }
  friend bool operator==(const Rational& a, const Rational& b) {
    return a.num_ == b.num_ && a.den_ == b.den_;
  }

  std::string str() const;

private:
  void normalize();
  std::int64_t num_;
  std::int64_t den_;
};

// An Einstein metric with its constants: Ric = (Sc/m) g, Sc = m(m-1) lambda.
struct EinsteinSpec {
  MetricPatch patch;
  int m = 0;
  Rational sc;                     // constant scalar curvature
  std::optional<Rational> lambda;  // defined for m >= 2
  std::string label;

  double sc_value() const { return sc.value(); }
};

enum class Definiteness { positive, negative };

// Conformally flat constant-curvature model g = (1 + K |x|^2/4)^{-2} delta on
// a box inside |x|^2 < 4/|K|; `negative` flips the overall sign of g.
EinsteinSpec constant_curvature_metric(int m, double K,
                                       Definiteness definiteness = Definiteness::positive);

// The 0-dimensional point factor.
EinsteinSpec point_spec();

// alpha * g; Sc and lambda divide by alpha, signature flips for alpha < 0.
EinsteinSpec scale_metric(const EinsteinSpec& spec, double alpha);

// For factors of nonzero scalar curvature with common sign eps:
// eps*(m4 Sc(g3) g3 + m3 Sc(g4) g4), an Einstein product metric of scalar
// curvature eps*(m3+m4)/(m3 m4).
EinsteinSpec einstein_product(const EinsteinSpec& g3, const EinsteinSpec& g4, int eps);

// Block-diagonal product patch on the concatenated chart (no Einstein claim).
MetricPatch product_metric(const EinsteinSpec& g1, const EinsteinSpec& g2);

// mu solving 2 m1 (m1-1) mu = Sc1 and 2 m2 (m2-1) mu = -Sc2. Unique when some
// dimension is >= 2, otherwise a free parameter.
struct MuSolution {
  Rational mu;
  bool free = false;
  bool constraints_satisfied = true;

  double value() const { return mu.value(); }
};

MuSolution solve_mu(int m1, const Rational& sc1, int m2, const Rational& sc2);
MuSolution solve_mu(int m1, double sc1, int m2, double sc2);

// Resolve a catalog name like "sphere(2,1)", "hyperbolic(3,1)", "flat(2)",
// "point", "neg(sphere(2,1))", "scaled(sphere(2,1),4)",
// "einstein_product(sphere(2,1),sphere(2,1),+1)".
EinsteinSpec catalog_lookup(const std::string& name);

}  // namespace pem
