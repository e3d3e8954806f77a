#include "pem/forms.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <memory>
#include <mutex>

namespace pem {

int permutation_sign(std::span<const int> tuple) {
  int sign = 1;
  std::vector<int> v(tuple.begin(), tuple.end());
  for (std::size_t i = 0; i < v.size(); ++i) {
    for (std::size_t j = i + 1; j < v.size(); ++j) {
      if (v[i] == v[j]) return 0;
      if (v[i] > v[j]) {
        std::swap(v[i], v[j]);
        sign = -sign;
      }
    }
  }
  return sign;
}

FormBasis::FormBasis(int dim, int degree) : dim_(dim), degree_(degree) {
  if (degree == 0) {
    tuples_.push_back({});
    return;
  }
  std::vector<int> cur(degree);
  // lexicographic enumeration of increasing tuples
  std::function<void(int, int)> rec = [&](int pos, int start) {
    if (pos == degree) {
      tuples_.push_back(cur);
      return;
    }
    for (int v = start; v < dim_; ++v) {
      cur[pos] = v;
      rec(pos + 1, v + 1);
    }
  };
  rec(0, 0);
}

const FormBasis& FormBasis::get(int dim, int degree) {
  static std::mutex mu;
  static std::map<std::pair<int, int>, std::unique_ptr<FormBasis>> cache;
  std::lock_guard<std::mutex> lock(mu);
  auto key = std::make_pair(dim, degree);
  auto it = cache.find(key);
  if (it == cache.end()) {
    it = cache.emplace(key, std::unique_ptr<FormBasis>(new FormBasis(dim, degree))).first;
  }
  return *it->second;
}

int FormBasis::index_of(std::span<const int> tuple) const {
  for (int i = 0; i < size(); ++i) {
    if (std::equal(tuple.begin(), tuple.end(), tuples_[i].begin(), tuples_[i].end()))
      return i;
  }
  return -1;
}

std::pair<int, int> FormBasis::locate(std::span<const int> tuple) const {
  const int sign = permutation_sign(tuple);
  if (sign == 0) return {-1, 0};
  std::vector<int> sorted(tuple.begin(), tuple.end());
  std::sort(sorted.begin(), sorted.end());
  return {index_of(sorted), sign};
}

std::vector<Jet> FormField::eval_jets(const JetSpace& space,
                                      std::span<const double> coords) const {
  auto vars = seed_variables(space, coords);
  std::vector<Jet> out(ncomps(), Jet(space, 0.0));
  fn(vars, out);
  return out;
}

std::vector<double> FormField::eval(std::span<const double> coords) const {
  const JetSpace& sp = JetSpace::get(dim, 0);
  auto jets = eval_jets(sp, coords);
  std::vector<double> v(jets.size());
  for (std::size_t i = 0; i < jets.size(); ++i) v[i] = jets[i].value();
  return v;
}

FormField coordinate_form(int dim, std::vector<int> tuple) {
  const int degree = static_cast<int>(tuple.size());
  const auto& basis = FormBasis::get(dim, degree);
  auto [idx, sign] = basis.locate(tuple);
  if (idx < 0 && sign == 0) throw DegreeMismatch("coordinate form with repeated index");
  return {dim, degree, [idx, sign](JetVars vars, std::span<Jet> out) {
            for (auto& j : out) j = Jet(vars[0].space(), 0.0);
            out[idx] = Jet(vars[0].space(), static_cast<double>(sign));
          }};
}

FormField zero_form(int dim, int degree) {
  return {dim, degree, [](JetVars vars, std::span<Jet> out) {
            for (auto& j : out) j = Jet(vars[0].space(), 0.0);
          }};
}

FormField form_sum(const FormField& a, const FormField& b) {
  if (a.degree != b.degree || a.dim != b.dim)
    throw DegreeMismatch("form_sum of incompatible forms");
  return {a.dim, a.degree, [a, b](JetVars vars, std::span<Jet> out) {
            std::vector<Jet> tmp(out.size(), Jet(vars[0].space(), 0.0));
            a.fn(vars, out);
            b.fn(vars, tmp);
            for (std::size_t i = 0; i < out.size(); ++i) out[i] += tmp[i];
          }};
}

FormField scale_form(const FormField& a, std::function<Jet(JetVars)> scalar) {
  return {a.dim, a.degree, [a, scalar](JetVars vars, std::span<Jet> out) {
            a.fn(vars, out);
            const Jet s = scalar(vars);
            for (auto& j : out) j = j * s;
          }};
}

// Field evaluators are always invoked on freshly seeded chart variables, so a
// derivative combinator may re-seed one order higher to keep the output order
// equal to the caller's.
FormField exterior_d(const FormField& a) {
  const int dim = a.dim;
  const int p = a.degree;
  if (p >= dim) {
    return zero_form(dim, p + 1);
  }
  return {dim, p + 1, [a, dim, p](JetVars vars, std::span<Jet> out) {
            const auto& in_basis = FormBasis::get(dim, p);
            const auto& out_basis = FormBasis::get(dim, p + 1);
            const JetSpace& up =
                JetSpace::get(vars[0].space().dim(), vars[0].space().order() + 1);
            std::vector<double> coords(vars.size());
            for (std::size_t i = 0; i < vars.size(); ++i) coords[i] = vars[i].value();
            auto upvars = seed_variables(up, coords);
            std::vector<Jet> comps(in_basis.size(), Jet(up, 0.0));
            a.fn(upvars, comps);
            std::vector<int> rest(p);
            for (int oi = 0; oi < out_basis.size(); ++oi) {
              auto T = out_basis.tuple(oi);
              Jet s(vars[0].space(), 0.0);
              for (int drop = 0; drop <= p; ++drop) {
                int k = 0;
                for (int q = 0; q <= p; ++q)
                  if (q != drop) rest[k++] = T[q];
                const int sign = (drop % 2 == 0) ? 1 : -1;
                const int ii = in_basis.index_of(rest);
                s += comps[ii].d(T[drop]) * static_cast<double>(sign);
              }
              out[oi] = s;
            }
          }};
}

FormField wedge(const FormField& a, const FormField& b) {
  if (a.dim != b.dim) throw DegreeMismatch("wedge of forms on different charts");
  const int dim = a.dim;
  const int p = a.degree, q = b.degree;
  if (p + q > dim) return zero_form(dim, p + q);
  return {dim, p + q, [a, b, dim, p, q](JetVars vars, std::span<Jet> out) {
            const auto& ab = FormBasis::get(dim, p);
            const auto& bb = FormBasis::get(dim, q);
            const auto& ob = FormBasis::get(dim, p + q);
            std::vector<Jet> ac(ab.size(), Jet(vars[0].space(), 0.0));
            std::vector<Jet> bc(bb.size(), Jet(vars[0].space(), 0.0));
            a.fn(vars, ac);
            b.fn(vars, bc);
            for (auto& j : out) j = Jet(vars[0].space(), 0.0);
            // Sum over (p,q)-shuffles of each output tuple.
            std::vector<int> sel(p + q);
            for (int oi = 0; oi < ob.size(); ++oi) {
              auto T = ob.tuple(oi);
              // choose positions of the a-part
              std::vector<int> pos(p);
              std::function<void(int, int)> rec = [&](int at, int start) {
                if (at == p) {
                  std::vector<int> ta(p), tb(q);
                  std::vector<bool> used(p + q, false);
                  for (int i = 0; i < p; ++i) {
                    ta[i] = T[pos[i]];
                    used[pos[i]] = true;
                  }
                  int k = 0;
                  for (int i = 0; i < p + q; ++i)
                    if (!used[i]) tb[k++] = T[i];
                  // parity of the shuffle
                  int inv = 0;
                  for (int i = 0; i < p; ++i) inv += pos[i] - i;
                  const int sign = (inv % 2 == 0) ? 1 : -1;
                  const int ia = ab.index_of(ta);
                  const int ib = bb.index_of(tb);
                  out[oi] += ac[ia] * bc[ib] * static_cast<double>(sign);
                  return;
                }
                for (int v = start; v <= p + q - (p - at); ++v) {
                  pos[at] = v;
                  rec(at + 1, v + 1);
                }
              };
              if (p == 0) {
                std::vector<int> tb(T.begin(), T.end());
                out[oi] = ac[0] * bc[bb.index_of(tb)];
              } else {
                rec(0, 0);
              }
            }
          }};
}

FormField interior_product(const VectorField& X, const FormField& a) {
  if (a.degree == 0) throw DegreeMismatch("interior product with a 0-form");
  const int dim = a.dim;
  const int p = a.degree;
  return {dim, p - 1, [X, a, dim, p](JetVars vars, std::span<Jet> out) {
            const auto& in_basis = FormBasis::get(dim, p);
            const auto& out_basis = FormBasis::get(dim, p - 1);
            std::vector<Jet> comps(in_basis.size(), Jet(vars[0].space(), 0.0));
            std::vector<Jet> xc(dim, Jet(vars[0].space(), 0.0));
            a.fn(vars, comps);
            X.fn(vars, xc);
            std::vector<int> full(p);
            for (int oi = 0; oi < out_basis.size(); ++oi) {
              auto T = out_basis.tuple(oi);
              Jet s(vars[0].space(), 0.0);
              for (int k = 0; k < dim; ++k) {
                full[0] = k;
                std::copy(T.begin(), T.end(), full.begin() + 1);
                auto [idx, sign] = in_basis.locate(full);
                if (sign == 0) continue;
                s += xc[k] * comps[idx] * static_cast<double>(sign);
              }
              out[oi] = s;
            }
          }};
}

FormField volume_form(const MetricPatch& patch) {
  if (!patch.oriented()) throw OrientationUnset("volume form needs an orientation");
  const int dim = patch.dim();
  MetricFn eval = [p = patch](JetVars vars, Mat<Jet>& out) { p.eval(vars, out); };
  return {dim, dim, [eval, dim](JetVars vars, std::span<Jet> out) {
            Mat<Jet> g(dim, Jet(vars[0].space(), 0.0));
            eval(vars, g);
            Jet det = matrix_determinant(g, Jet(vars[0].space(), 1.0));
            if (det.value() < 0.0) det = -det;
            out[0] = sqrt(det);
          }};
}

namespace {

// Raise all indices of the value of `a` at x; returns components on the
// increasing basis.
std::vector<double> raise_all(const Mat<double>& ginv, const FormBasis& basis,
                              std::span<const double> comps) {
  const int p = basis.degree();
  const int dim = basis.dim();
  std::vector<double> out(basis.size(), 0.0);
  if (p == 0) {
    out[0] = comps[0];
    return out;
  }
  std::vector<int> I(p);
  for (int oi = 0; oi < basis.size(); ++oi) {
    auto J = basis.tuple(oi);
    // sum over all index tuples I of prod g^{J_a I_a} comps_I
    double total = 0.0;
    std::vector<int> idx(p, 0);
    while (true) {
      auto [ci, sign] = basis.locate(idx);
      if (sign != 0) {
        double term = comps[ci] * sign;
        for (int a = 0; a < p; ++a) term *= ginv(J[a], idx[a]);
        total += term;
      }
      int pos = p - 1;
      while (pos >= 0 && ++idx[pos] == dim) idx[pos--] = 0;
      if (pos < 0) break;
    }
    out[oi] = total;
  }
  return out;
}

}  // namespace

std::vector<double> covariant_derivative(const MetricPatch& patch, const FormField& a,
                                         std::span<const double> Y, const ChartPoint& x) {
  const int dim = patch.dim();
  const int p = a.degree;
  const auto& basis = FormBasis::get(dim, p);
  const JetSpace& sp1 = JetSpace::get(dim, 1);
  auto comps = a.eval_jets(sp1, x.coords);
  Tensor3<double> gamma = christoffel_at(patch, x);

  std::vector<double> out(basis.size(), 0.0);
  std::vector<int> tup(p);
  for (int oi = 0; oi < basis.size(); ++oi) {
    auto T = basis.tuple(oi);
    double s = 0.0;
    for (int k = 0; k < dim; ++k) {
      if (Y[k] == 0.0) continue;
      double dk = comps[oi].d(k).value();
      for (int a_pos = 0; a_pos < p; ++a_pos) {
        std::copy(T.begin(), T.end(), tup.begin());
        for (int m = 0; m < dim; ++m) {
          const double G = gamma(m, k, T[a_pos]);
          if (G == 0.0) continue;
          tup[a_pos] = m;
          auto [ci, sign] = basis.locate(tup);
          if (sign == 0) continue;
          dk -= G * comps[ci].value() * sign;
        }
        tup[a_pos] = T[a_pos];
      }
      s += Y[k] * dk;
    }
    out[oi] = s;
  }
  return out;
}

std::vector<double> hodge_star(const MetricPatch& patch, const FormField& a,
                               const ChartPoint& x) {
  if (!patch.oriented()) throw OrientationUnset("hodge star needs an orientation");
  const int dim = patch.dim();
  const int p = a.degree;
  const auto& in_basis = FormBasis::get(dim, p);
  const auto& out_basis = FormBasis::get(dim, dim - p);
  auto m = metric_eval(patch, x);
  const double det = matrix_determinant(m.g, 1.0);
  const double vol = std::sqrt(std::abs(det));

  auto comps = a.eval(x.coords);
  auto raised = raise_all(m.g_inv, in_basis, comps);

  std::vector<double> out(out_basis.size(), 0.0);
  std::vector<int> full(dim);
  for (int oi = 0; oi < out_basis.size(); ++oi) {
    auto J = out_basis.tuple(oi);
    double s = 0.0;
    for (int ii = 0; ii < in_basis.size(); ++ii) {
      auto I = in_basis.tuple(ii);
      std::copy(I.begin(), I.end(), full.begin());
      std::copy(J.begin(), J.end(), full.begin() + p);
      const int sign = permutation_sign(full);
      if (sign == 0) continue;
      s += raised[ii] * sign;
    }
    out[oi] = vol * s;
  }
  return out;
}

double form_norm2(const MetricPatch& patch, const FormField& a, const ChartPoint& x) {
  const int dim = patch.dim();
  const auto& basis = FormBasis::get(dim, a.degree);
  auto m = metric_eval(patch, x);
  auto comps = a.eval(x.coords);
  auto raised = raise_all(m.g_inv, basis, comps);
  double s = 0.0;
  for (int i = 0; i < basis.size(); ++i) s += comps[i] * raised[i];
  return s;
}

VectorField sharp(const MetricPatch& patch, const FormField& a) {
  if (a.degree != 1) throw DegreeMismatch("sharp of a non-1-form");
  const int dim = patch.dim();
  MetricFn eval = [p = patch](JetVars vars, Mat<Jet>& out) { p.eval(vars, out); };
  return {dim, [eval, a, dim](JetVars vars, std::span<Jet> out) {
            Mat<Jet> g(dim, Jet(vars[0].space(), 0.0));
            eval(vars, g);
            Mat<Jet> ginv = matrix_inverse(g, Jet(vars[0].space(), 0.0),
                                           Jet(vars[0].space(), 1.0), 1e-14);
            std::vector<Jet> comps(dim, Jet(vars[0].space(), 0.0));
            a.fn(vars, comps);
            for (int i = 0; i < dim; ++i) {
              Jet s(vars[0].space(), 0.0);
              for (int j = 0; j < dim; ++j) s += ginv(i, j) * comps[j];
              out[i] = s;
            }
          }};
}

}  // namespace pem
