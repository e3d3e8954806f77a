#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "pem/errors.hpp"

namespace pem {

// Shared coefficient layout for truncated multivariate Taylor polynomials in
// `dim` variables up to total degree `order`. Monomials are enumerated by
// degree, then lexicographically, so the layout for a lower order is a prefix
// of the layout for a higher one. Instances are interned; Jets keep a pointer.
class JetSpace {
public:
  static const JetSpace& get(int dim, int order);

  int dim() const { return dim_; }
  int order() const { return order_; }
  int size() const { return static_cast<int>(degrees_.size()); }

  // Exponent vector of monomial `idx` (length dim).
  std::span<const std::uint8_t> monomial(int idx) const {
    return {exps_.data() + static_cast<std::size_t>(idx) * dim_,
            static_cast<std::size_t>(dim_)};
  }
  int degree(int idx) const { return degrees_[idx]; }
  // Index of a monomial, or -1 if its degree exceeds `order`.
  int index_of(std::span<const std::uint8_t> alpha) const;
  // Number of monomials of degree <= d (prefix length).
  int prefix_size(int d) const { return prefix_[d]; }
  // alpha! for monomial idx.
  double factorial(int idx) const { return facts_[idx]; }

  struct MulTriple {
    std::int32_t a, b, out;
  };
  std::span<const MulTriple> mul_triples() const { return mul_; }

private:
  JetSpace(int dim, int order);

  int dim_;
  int order_;
  std::vector<std::uint8_t> exps_;   // dim per monomial
  std::vector<int> degrees_;
  std::vector<int> prefix_;          // prefix_[d] = #monos with degree <= d
  std::vector<double> facts_;
  std::vector<std::uint64_t> keys_;  // packed exponents, sorted with perm_
  std::vector<int> perm_;
  std::vector<MulTriple> mul_;
};

// Truncated Taylor polynomial: value plus all partial derivatives up to the
// space's order (stored as Taylor coefficients, i.e. divided by alpha!).
class Jet {
public:
  Jet() : space_(nullptr) {}
  Jet(const JetSpace& space, double constant);
  static Jet variable(const JetSpace& space, int i, double value);
  // Build from raw partial derivatives indexed like space monomials.
  static Jet from_partials(const JetSpace& space, std::span<const double> partials);

  bool valid() const { return space_ != nullptr; }
  const JetSpace& space() const { return *space_; }
  int order() const { return space_->order(); }

  double value() const { return c_[0]; }
  // Raw partial derivative for monomial index (Taylor coeff times alpha!).
  double partial(int mono_idx) const { return c_[mono_idx] * space_->factorial(mono_idx); }
  double coeff(int mono_idx) const { return c_[mono_idx]; }
  std::span<const double> coeffs() const { return c_; }

  // Truncate to a lower order (same dim).
  Jet truncated(int new_order) const;
  // Partial derivative with respect to variable i; result lives one order down.
  Jet d(int i) const;

  Jet operator-() const;
  Jet& operator+=(const Jet& o);
  Jet& operator-=(const Jet& o);
  Jet& operator+=(double s);
  Jet& operator-=(double s);
  Jet& operator*=(double s);

  friend Jet operator+(Jet a, const Jet& b) { return a += b; }
  friend Jet operator-(Jet a, const Jet& b) { return a -= b; }
  friend Jet operator+(Jet a, double s) { return a += s; }
  friend Jet operator+(double s, Jet a) { return a += s; }
  friend Jet operator-(Jet a, double s) { return a -= s; }
  friend Jet operator-(double s, const Jet& a) { return (-a) += s; }
  friend Jet operator*(Jet a, double s) { return a *= s; }
  friend Jet operator*(double s, Jet a) { return a *= s; }
  friend Jet operator*(const Jet& a, const Jet& b);
  friend Jet operator/(const Jet& a, const Jet& b);
  friend Jet operator/(Jet a, double s) { return a *= (1.0 / s); }
  friend Jet operator/(double s, const Jet& b);

  // Analytic functions of a jet (Taylor recurrences around the value).
  friend Jet recip(const Jet& u);
  friend Jet sqrt(const Jet& u);
  friend Jet pow_real(const Jet& u, double a);
  friend Jet pow_int(const Jet& u, int n);
  friend Jet exp(const Jet& u);
  friend Jet log(const Jet& u);
  friend Jet sinh(const Jet& u);
  friend Jet cosh(const Jet& u);

private:
  static const JetSpace* common_space(const Jet& a, const Jet& b);
  // Composition sum_k c[k] * (u - u0)^k by Horner.
  static Jet compose(const Jet& u, std::span<const double> series);

  const JetSpace* space_;
  std::vector<double> c_;
};

// Seed all chart coordinates as jet variables.
std::vector<Jet> seed_variables(const JetSpace& space, std::span<const double> coords);

}  // namespace pem
