#include "pem/catalog.hpp"

#include <cmath>
#include <numeric>

namespace pem {

namespace {

std::int64_t checked(__int128 v, const char* what) {
  if (v > INT64_MAX || v < INT64_MIN) {
    throw Error(std::string("rational overflow in ") + what);
  }
  return static_cast<std::int64_t>(v);
}

}  // namespace

Rational::Rational(std::int64_t n, std::int64_t d) : num_(n), den_(d) {
  if (d == 0) throw Error("rational with zero denominator");
  normalize();
}

void Rational::normalize() {
  if (den_ < 0) {
    num_ = -num_;
    den_ = -den_;
  }
  const std::int64_t g = std::gcd(num_ < 0 ? -num_ : num_, den_);
  if (g > 1) {
    num_ /= g;
    den_ /= g;
  }
  if (num_ == 0) den_ = 1;
}

Rational Rational::from_double(double x) {
  if (!std::isfinite(x)) throw Error("rational from non-finite double");
  if (x == 0.0) return Rational(0);
  int e = 0;
  const double m = std::frexp(x, &e);  // x = m * 2^e, |m| in [0.5, 1)
  const std::int64_t mant = static_cast<std::int64_t>(std::ldexp(m, 53));
  e -= 53;
  if (e >= 0) {
    if (e > 10) throw Error("double too large for exact rational conversion");
    return Rational(mant << e, 1);
  }
  if (e < -62) {
    // Fall back through the shortest still-exact representation.
    std::int64_t n = mant;
    while (n % 2 == 0 && e < -62) {
      n /= 2;
      ++e;
    }
    if (e < -62) throw Error("double too small for exact rational conversion");
    return Rational(n, static_cast<std::int64_t>(1) << (-e));
  }
  return Rational(mant, static_cast<std::int64_t>(1) << (-e));
}

Rational operator+(const Rational& a, const Rational& b) {
  __int128 n = static_cast<__int128>(a.num_) * b.den_ +
               static_cast<__int128>(b.num_) * a.den_;
  __int128 d = static_cast<__int128>(a.den_) * b.den_;
  return Rational(checked(n, "+"), checked(d, "+"));
}

Rational operator-(const Rational& a, const Rational& b) { return a + (-b); }

Rational operator*(const Rational& a, const Rational& b) {
  // cross-reduce first
  Rational x(a.num_, b.den_), y(b.num_, a.den_);
  __int128 n = static_cast<__int128>(x.num_) * y.num_;
  __int128 d = static_cast<__int128>(x.den_) * y.den_;
  return Rational(checked(n, "*"), checked(d, "*"));
}

Rational operator/(const Rational& a, const Rational& b) {
  if (b.num_ == 0) throw Error("rational division by zero");
  return a * Rational(b.den_, b.num_);
}

std::string Rational::str() const {
  if (den_ == 1) return std::to_string(num_);
  return std::to_string(num_) + "/" + std::to_string(den_);
}

EinsteinSpec constant_curvature_metric(int m, double K, Definiteness definiteness) {
  if (m < 1) throw BadDimension("constant curvature metric needs m >= 1");
  const double overall = (definiteness == Definiteness::positive) ? 1.0 : -1.0;

  Domain dom;
  if (K != 0.0) {
    // keep the box inside |x|^2 < 4/|K|
    const double hw = 0.95 * 2.0 / std::sqrt(std::abs(K) * m);
    dom = Domain::cube(m, hw);
  } else {
    dom = Domain::cube(m, 4.0);
  }

  MetricFn fn = [m, K, overall](JetVars vars, Mat<Jet>& out) {
    const JetSpace& sp = vars[0].space();
    Jet r2(sp, 0.0);
    for (int i = 0; i < m; ++i) r2 += vars[i] * vars[i];
    const Jet f = recip(pow_int(1.0 + r2 * (K / 4.0), 2)) * overall;
    const Jet zero(sp, 0.0);
    for (int i = 0; i < m; ++i)
      for (int j = 0; j < m; ++j) out(i, j) = (i == j) ? f : zero;
  };

  const Rational k_rat = Rational::from_double(K);
  const Rational sc =
      Rational(m) * Rational(m - 1) * k_rat * (overall > 0 ? Rational(1) : Rational(-1));
  Signature sig = (definiteness == Definiteness::positive) ? Signature{m, 0}
                                                           : Signature{0, m};
  std::string label = (K > 0 ? "sphere(" : (K < 0 ? "hyperbolic(" : "flat("));
  label += std::to_string(m) + ")";
  EinsteinSpec spec{MetricPatch(m, sig, label, dom, fn), m, sc, std::nullopt, label};
  if (m >= 2) spec.lambda = sc / (Rational(m) * Rational(m - 1));
  return spec;
}

EinsteinSpec point_spec() {
  Domain dom;  // empty box
  MetricFn fn = [](JetVars, Mat<Jet>&) {};
  return {MetricPatch(0, Signature{0, 0}, "point", dom, fn), 0, Rational(0),
          std::nullopt, "point"};
}

EinsteinSpec scale_metric(const EinsteinSpec& spec, double alpha) {
  if (alpha == 0.0) throw ZeroScale("scale_metric with alpha = 0");
  const Rational a = Rational::from_double(alpha);
  MetricFn inner = [p = spec.patch, alpha](JetVars vars, Mat<Jet>& out) {
    p.eval(vars, out);
    for (int i = 0; i < out.n(); ++i)
      for (int j = 0; j < out.n(); ++j) out(i, j) *= alpha;
  };
  Signature sig = alpha > 0 ? spec.patch.signature() : spec.patch.signature().flipped();
  EinsteinSpec out{MetricPatch(spec.m, sig, spec.patch.chart_id(), spec.patch.domain(),
                               inner, spec.patch.max_jet_order()),
                   spec.m, spec.sc / a, std::nullopt,
                   "scaled(" + spec.label + "," + a.str() + ")"};
  if (spec.lambda) out.lambda = *spec.lambda / a;
  return out;
}

EinsteinSpec einstein_product(const EinsteinSpec& g3, const EinsteinSpec& g4, int eps) {
  if (eps != 1 && eps != -1) throw SignMismatch("eps must be +1 or -1");
  if (g3.sc.is_zero() || g4.sc.is_zero()) {
    throw SignMismatch("einstein_product requires nonzero scalar curvatures");
  }
  if (g3.sc.sign() != eps || g4.sc.sign() != eps) {
    throw SignMismatch("scalar curvatures must both have sign eps");
  }
  const Rational c3 = Rational(eps) * Rational(g4.m) * g3.sc;
  const Rational c4 = Rational(eps) * Rational(g3.m) * g4.sc;
  EinsteinSpec s3 = scale_metric(g3, c3.value());
  EinsteinSpec s4 = scale_metric(g4, c4.value());
  MetricPatch prod = product_metric(s3, s4);

  const int m = g3.m + g4.m;
  const Rational sc = Rational(eps) * Rational(g3.m + g4.m) /
                      (Rational(g3.m) * Rational(g4.m));
  EinsteinSpec out{std::move(prod), m, sc, std::nullopt,
                   "einstein_product(" + g3.label + "," + g4.label + "," +
                       (eps > 0 ? "+1" : "-1") + ")"};
  out.lambda = sc / (Rational(m) * Rational(m - 1));
  return out;
}

MetricPatch product_metric(const EinsteinSpec& g1, const EinsteinSpec& g2) {
  if (g2.m == 0) return g1.patch;
  if (g1.m == 0) return g2.patch;
  const int m1 = g1.m, m2 = g2.m;
  MetricFn fn = [p1 = g1.patch, p2 = g2.patch, m1, m2](JetVars vars, Mat<Jet>& out) {
    const JetSpace& sp = vars[0].space();
    const Jet zero(sp, 0.0);
    for (int i = 0; i < m1 + m2; ++i)
      for (int j = 0; j < m1 + m2; ++j) out(i, j) = zero;
    Mat<Jet> b1(m1, zero), b2(m2, zero);
    p1.eval(vars.subspan(0, m1), b1);
    p2.eval(vars.subspan(m1, m2), b2);
    for (int i = 0; i < m1; ++i)
      for (int j = 0; j < m1; ++j) out(i, j) = b1(i, j);
    for (int i = 0; i < m2; ++i)
      for (int j = 0; j < m2; ++j) out(m1 + i, m1 + j) = b2(i, j);
  };
  Signature s1 = g1.patch.signature(), s2 = g2.patch.signature();
  return MetricPatch(m1 + m2, Signature{s1.p + s2.p, s1.q + s2.q},
                     g1.label + "*" + g2.label,
                     Domain::product(g1.patch.domain(), g2.patch.domain()), fn,
                     std::min(g1.patch.max_jet_order(), g2.patch.max_jet_order()));
}

MuSolution solve_mu(int m1, const Rational& sc1, int m2, const Rational& sc2) {
  if (m1 < 1 || m2 < 0) throw BadDimension("solve_mu needs m1 >= 1, m2 >= 0");
  // 1-dimensional and 0-dimensional factors have Sc = 0 identically; their
  // constraint is vacuous.
  if (m1 <= 1 && !sc1.is_zero())
    throw IncompatibleScalars("Sc(g1) must vanish for m1 <= 1");
  if (m2 <= 1 && !sc2.is_zero())
    throw IncompatibleScalars("Sc(g2) must vanish for m2 <= 1");

  const bool c1 = m1 >= 2;
  const bool c2 = m2 >= 2;
  MuSolution out;
  if (!c1 && !c2) {
    out.free = true;
    out.mu = Rational(0);
    return out;
  }
  std::optional<Rational> mu1, mu2;
  if (c1) mu1 = sc1 / (Rational(2) * Rational(m1) * Rational(m1 - 1));
  if (c2) mu2 = -sc2 / (Rational(2) * Rational(m2) * Rational(m2 - 1));
  if (mu1 && mu2 && !(*mu1 == *mu2)) {
    throw IncompatibleScalars("m2(m2-1)Sc(g1) != -m1(m1-1)Sc(g2): mu candidates " +
                              mu1->str() + " vs " + mu2->str());
  }
  out.mu = mu1 ? *mu1 : *mu2;
  return out;
}

MuSolution solve_mu(int m1, double sc1, int m2, double sc2) {
  return solve_mu(m1, Rational::from_double(sc1), m2, Rational::from_double(sc2));
}

namespace {

struct NameParser {
  const std::string& s;
  std::size_t pos = 0;

  void skip_ws() {
    while (pos < s.size() && s[pos] == ' ') ++pos;
  }
  bool eat(char c) {
    skip_ws();
    if (pos < s.size() && s[pos] == c) {
      ++pos;
      return true;
    }
    return false;
  }
  void expect(char c) {
    if (!eat(c)) {
      throw ValidationError("catalog name '" + s + "': expected '" + c + "' at offset " +
                            std::to_string(pos));
    }
  }
  std::string ident() {
    skip_ws();
    std::size_t start = pos;
    while (pos < s.size() && (std::isalnum(static_cast<unsigned char>(s[pos])) ||
                              s[pos] == '_')) {
      ++pos;
    }
    if (start == pos)
      throw ValidationError("catalog name '" + s + "': identifier expected at offset " +
                            std::to_string(pos));
    return s.substr(start, pos - start);
  }
  double number() {
    skip_ws();
    std::size_t start = pos;
    while (pos < s.size() && (std::isdigit(static_cast<unsigned char>(s[pos])) ||
                              s[pos] == '.' || s[pos] == '-' || s[pos] == '+' ||
                              s[pos] == 'e' || s[pos] == 'E' || s[pos] == '/')) {
      ++pos;
    }
    const std::string tok = s.substr(start, pos - start);
    if (tok.empty())
      throw ValidationError("catalog name '" + s + "': number expected at offset " +
                            std::to_string(start));
    // allow p/q fractions
    const auto slash = tok.find('/');
    try {
      if (slash != std::string::npos) {
        return std::stod(tok.substr(0, slash)) / std::stod(tok.substr(slash + 1));
      }
      return std::stod(tok);
    } catch (const std::exception&) {
      throw ValidationError("catalog name '" + s + "': bad number '" + tok + "'");
    }
  }

  EinsteinSpec entry() {
    const std::string head = ident();
    if (head == "point") return point_spec();
    expect('(');
    if (head == "sphere" || head == "hyperbolic") {
      const int m = static_cast<int>(number());
      expect(',');
      const double K = number();
      expect(')');
      if (K <= 0)
        throw ValidationError("catalog name '" + s + "': curvature must be positive");
      return constant_curvature_metric(m, head == "sphere" ? K : -K);
    }
    if (head == "flat") {
      const int m = static_cast<int>(number());
      expect(')');
      return constant_curvature_metric(m, 0.0);
    }
    if (head == "abstract") {
      // dimension and scalar curvature only; no coordinate model
      const int m = static_cast<int>(number());
      expect(',');
      const double sc = number();
      expect(')');
      EinsteinSpec spec{MetricPatch(), m, Rational::from_double(sc), std::nullopt,
                        "abstract(" + std::to_string(m) + ")"};
      if (m >= 2) spec.lambda = spec.sc / (Rational(m) * Rational(m - 1));
      return spec;
    }
    if (head == "neg") {
      EinsteinSpec inner = entry();
      expect(')');
      return scale_metric(inner, -1.0);
    }
    if (head == "scaled") {
      EinsteinSpec inner = entry();
      expect(',');
      const double alpha = number();
      expect(')');
      return scale_metric(inner, alpha);
    }
    if (head == "einstein_product") {
      EinsteinSpec a = entry();
      expect(',');
      EinsteinSpec b = entry();
      expect(',');
      const int eps = number() > 0 ? 1 : -1;
      expect(')');
      return einstein_product(a, b, eps);
    }
    throw ValidationError("unknown catalog entry '" + head + "' in '" + s + "'");
  }
};

}  // namespace

EinsteinSpec catalog_lookup(const std::string& name) {
  NameParser p{name};
  EinsteinSpec spec = p.entry();
  p.skip_ws();
  if (p.pos != name.size()) {
    throw ValidationError("catalog name '" + name + "': trailing characters");
  }
  return spec;
}

}  // namespace pem
