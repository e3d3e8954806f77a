#include "pem/jet.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <memory>
#include <mutex>

namespace pem {

namespace {

std::uint64_t pack_exponents(std::span<const std::uint8_t> alpha) {
  // 6 bits per variable keeps dim <= 10 with order <= 63 collision free.
  std::uint64_t key = 0;
  for (std::size_t i = 0; i < alpha.size(); ++i) {
    key |= static_cast<std::uint64_t>(alpha[i]) << (6 * i);
  }
  return key;
}

void enumerate_monos(int dim, int order, std::vector<std::uint8_t>& exps,
                     std::vector<int>& degrees) {
  // Degree-graded enumeration; within a degree, lexicographic on exponents.
  std::vector<std::uint8_t> cur(dim, 0);
  for (int deg = 0; deg <= order; ++deg) {
    // Generate all exponent vectors with |alpha| == deg recursively.
    struct Rec {
      int dim;
      std::vector<std::uint8_t>& cur;
      std::vector<std::uint8_t>& exps;
      std::vector<int>& degrees;
      int deg;
      void go(int pos, int left) {
        if (pos == dim - 1) {
          cur[pos] = static_cast<std::uint8_t>(left);
          exps.insert(exps.end(), cur.begin(), cur.end());
          degrees.push_back(deg);
          return;
        }
        for (int e = left; e >= 0; --e) {
          cur[pos] = static_cast<std::uint8_t>(e);
          go(pos + 1, left - e);
        }
      }
    } rec{dim, cur, exps, degrees, deg};
    if (dim == 0) {
      if (deg == 0) degrees.push_back(0);
      continue;
    }
    rec.go(0, deg);
  }
}

}  // namespace

JetSpace::JetSpace(int dim, int order) : dim_(dim), order_(order) {
  enumerate_monos(dim, order, exps_, degrees_);
  const int n = static_cast<int>(degrees_.size());
  prefix_.assign(order + 1, 0);
  facts_.resize(n);
  keys_.resize(n);
  perm_.resize(n);
  for (int i = 0; i < n; ++i) {
    for (int d = degrees_[i]; d <= order; ++d) prefix_[d]++;
    double f = 1.0;
    for (int v = 0; v < dim; ++v) {
      for (int k = 2; k <= exps_[static_cast<std::size_t>(i) * dim + v]; ++k) f *= k;
    }
    facts_[i] = f;
    keys_[i] = pack_exponents(monomial(i));
    perm_[i] = i;
  }
  std::sort(perm_.begin(), perm_.end(),
            [&](int a, int b) { return keys_[a] < keys_[b]; });

  for (int ia = 0; ia < n; ++ia) {
    for (int ib = 0; ib < n; ++ib) {
      if (degrees_[ia] + degrees_[ib] > order) continue;
      std::vector<std::uint8_t> sum(dim);
      auto ma = monomial(ia);
      auto mb = monomial(ib);
      for (int v = 0; v < dim; ++v) sum[v] = static_cast<std::uint8_t>(ma[v] + mb[v]);
      int io = index_of(sum);
      mul_.push_back({ia, ib, io});
    }
  }
}

int JetSpace::index_of(std::span<const std::uint8_t> alpha) const {
  int deg = 0;
  for (auto e : alpha) deg += e;
  if (deg > order_) return -1;
  const std::uint64_t key = pack_exponents(alpha);
  auto it = std::lower_bound(perm_.begin(), perm_.end(), key,
                             [&](int idx, std::uint64_t k) { return keys_[idx] < k; });
  return (it != perm_.end() && keys_[*it] == key) ? *it : -1;
}

const JetSpace& JetSpace::get(int dim, int order) {
  static std::mutex mu;
  static std::map<std::pair<int, int>, std::unique_ptr<JetSpace>> cache;
  std::lock_guard<std::mutex> lock(mu);
  auto key = std::make_pair(dim, order);
  auto it = cache.find(key);
  if (it == cache.end()) {
    it = cache.emplace(key, std::unique_ptr<JetSpace>(new JetSpace(dim, order))).first;
  }
  return *it->second;
}

Jet::Jet(const JetSpace& space, double constant) : space_(&space) {
  c_.assign(space.size(), 0.0);
  c_[0] = constant;
}

Jet Jet::variable(const JetSpace& space, int i, double value) {
  Jet j(space, value);
  if (space.order() >= 1) {
    std::vector<std::uint8_t> e(space.dim(), 0);
    e[i] = 1;
    j.c_[space.index_of(e)] = 1.0;
  }
  return j;
}

Jet Jet::from_partials(const JetSpace& space, std::span<const double> partials) {
  Jet j(space, 0.0);
  for (int i = 0; i < space.size(); ++i) j.c_[i] = partials[i] / space.factorial(i);
  return j;
}

Jet Jet::truncated(int new_order) const {
  if (new_order >= order()) return *this;
  const JetSpace& sp = JetSpace::get(space_->dim(), new_order);
  Jet j(sp, 0.0);
  std::copy(c_.begin(), c_.begin() + sp.size(), j.c_.begin());
  return j;
}

Jet Jet::d(int i) const {
  if (order() < 1) throw JetUnavailable("jet order exhausted taking a derivative");
  const JetSpace& sp = JetSpace::get(space_->dim(), order() - 1);
  Jet out(sp, 0.0);
  const int dim = space_->dim();
  std::vector<std::uint8_t> alpha(dim);
  for (int idx = 0; idx < sp.size(); ++idx) {
    auto m = sp.monomial(idx);
    std::copy(m.begin(), m.end(), alpha.begin());
    alpha[i]++;
    const int src = space_->index_of(alpha);
    out.c_[idx] = c_[src] * alpha[i];
  }
  return out;
}

const JetSpace* Jet::common_space(const Jet& a, const Jet& b) {
  if (a.space_ == b.space_) return a.space_;
  if (a.space_->dim() != b.space_->dim())
    throw JetUnavailable("jet dimension mismatch");
  return a.order() < b.order() ? a.space_ : b.space_;
}

Jet Jet::operator-() const {
  Jet j = *this;
  for (auto& x : j.c_) x = -x;
  return j;
}

Jet& Jet::operator+=(const Jet& o) {
  const JetSpace* sp = common_space(*this, o);
  if (sp != space_) *this = truncated(sp->order());
  for (int i = 0; i < sp->size(); ++i) c_[i] += o.c_[i];
  return *this;
}

Jet& Jet::operator-=(const Jet& o) {
  const JetSpace* sp = common_space(*this, o);
  if (sp != space_) *this = truncated(sp->order());
  for (int i = 0; i < sp->size(); ++i) c_[i] -= o.c_[i];
  return *this;
}

Jet& Jet::operator+=(double s) {
  c_[0] += s;
  return *this;
}

Jet& Jet::operator-=(double s) {
  c_[0] -= s;
  return *this;
}

Jet& Jet::operator*=(double s) {
  for (auto& x : c_) x *= s;
  return *this;
}

Jet operator*(const Jet& a, const Jet& b) {
  const JetSpace* sp = Jet::common_space(a, b);
  const Jet& ta = (a.space_ == sp) ? a : a.truncated(sp->order());
  const Jet& tb = (b.space_ == sp) ? b : b.truncated(sp->order());
  Jet out(*sp, 0.0);
  for (const auto& t : sp->mul_triples()) {
    out.c_[t.out] += ta.c_[t.a] * tb.c_[t.b];
  }
  return out;
}

Jet Jet::compose(const Jet& u, std::span<const double> series) {
  // series[k] = k-th Taylor coefficient of f about u.value().
  Jet w = u;
  w.c_[0] = 0.0;  // deviation from the expansion point
  const int K = static_cast<int>(series.size()) - 1;
  Jet r(*u.space_, series[K]);
  for (int k = K - 1; k >= 0; --k) {
    r = r * w;
    r += series[k];
  }
  return r;
}

Jet recip(const Jet& u) {
  const double u0 = u.value();
  if (u0 == 0.0) throw SingularMetric("jet reciprocal at zero");
  std::vector<double> s(u.order() + 1);
  double p = 1.0 / u0;
  for (int k = 0; k <= u.order(); ++k) {
    s[k] = p;
    p *= -1.0 / u0;
  }
  return Jet::compose(u, s);
}

Jet operator/(const Jet& a, const Jet& b) { return a * recip(b); }

Jet operator/(double s, const Jet& b) { return recip(b) * s; }

Jet pow_real(const Jet& u, double a) {
  const double u0 = u.value();
  if (u0 <= 0.0) throw JetUnavailable("pow_real of non-positive jet value");
  std::vector<double> s(u.order() + 1);
  s[0] = std::pow(u0, a);
  for (int k = 1; k <= u.order(); ++k) {
    s[k] = s[k - 1] * (a - (k - 1)) / (k * u0);
  }
  return Jet::compose(u, s);
}

Jet sqrt(const Jet& u) { return pow_real(u, 0.5); }

Jet pow_int(const Jet& u, int n) {
  if (n < 0) return recip(pow_int(u, -n));
  Jet r(u.space(), 1.0);
  for (int k = 0; k < n; ++k) r = r * u;
  return r;
}

Jet exp(const Jet& u) {
  std::vector<double> s(u.order() + 1);
  s[0] = std::exp(u.value());
  for (int k = 1; k <= u.order(); ++k) s[k] = s[k - 1] / k;
  return Jet::compose(u, s);
}

Jet log(const Jet& u) {
  const double u0 = u.value();
  if (u0 <= 0.0) throw JetUnavailable("log of non-positive jet value");
  std::vector<double> s(u.order() + 1);
  s[0] = std::log(u0);
  double p = 1.0 / u0;
  for (int k = 1; k <= u.order(); ++k) {
    s[k] = p / k;
    p *= -1.0 / u0;
  }
  return Jet::compose(u, s);
}

Jet sinh(const Jet& u) {
  const double sh = std::sinh(u.value());
  const double ch = std::cosh(u.value());
  std::vector<double> s(u.order() + 1);
  double fact = 1.0;
  for (int k = 0; k <= u.order(); ++k) {
    if (k > 0) fact *= k;
    s[k] = ((k % 2 == 0) ? sh : ch) / fact;
  }
  return Jet::compose(u, s);
}

Jet cosh(const Jet& u) {
  const double sh = std::sinh(u.value());
  const double ch = std::cosh(u.value());
  std::vector<double> s(u.order() + 1);
  double fact = 1.0;
  for (int k = 0; k <= u.order(); ++k) {
    if (k > 0) fact *= k;
    s[k] = ((k % 2 == 0) ? ch : sh) / fact;
  }
  return Jet::compose(u, s);
}

std::vector<Jet> seed_variables(const JetSpace& space, std::span<const double> coords) {
  std::vector<Jet> vars;
  vars.reserve(coords.size());
  for (std::size_t i = 0; i < coords.size(); ++i) {
    vars.push_back(Jet::variable(space, static_cast<int>(i), coords[i]));
  }
  return vars;
}

}  // namespace pem
