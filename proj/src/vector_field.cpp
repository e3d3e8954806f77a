#include "pem/vector_field.hpp"

namespace pem {

VectorField coordinate_scaling_field(int dim, int coord) {
  return {dim, [coord](JetVars vars, std::span<Jet> out) {
            for (std::size_t i = 0; i < out.size(); ++i) {
              out[i] = Jet(vars[0].space(), 0.0);
            }
            out[coord] = vars[coord];
          }};
}

VectorField field_sum(const VectorField& a, const VectorField& b) {
  return {a.dim, [a, b](JetVars vars, std::span<Jet> out) {
            std::vector<Jet> tmp(b.dim, Jet(vars[0].space(), 0.0));
            a.fn(vars, out);
            b.fn(vars, tmp);
            for (std::size_t i = 0; i < out.size(); ++i) out[i] += tmp[i];
          }};
}

VectorField zero_field(int dim) {
  return {dim, [](JetVars vars, std::span<Jet> out) {
            for (auto& j : out) j = Jet(vars[0].space(), 0.0);
          }};
}

Tensor3<double> christoffel_at(const MetricPatch& patch, const ChartPoint& x) {
  const int n = patch.dim();
  Mat<Jet> g = patch.jets(x, 1);
  Mat<double> g0(n, 0.0);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) g0(i, j) = g(i, j).value();
  Mat<double> ginv = matrix_inverse(g0, 0.0, 1.0, 1e-14);
  Tensor3<double> dg(n, 0.0);
  for (int a = 0; a < n; ++a)
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) dg(a, i, j) = g(i, j).d(a).value();
  Tensor3<double> gamma(n, 0.0);
  for (int c = 0; c < n; ++c)
    for (int a = 0; a < n; ++a)
      for (int b = a; b < n; ++b) {
        double s = 0.0;
        for (int d = 0; d < n; ++d)
          s += ginv(c, d) * (dg(a, d, b) + dg(b, d, a) - dg(d, a, b));
        gamma(c, a, b) = 0.5 * s;
        gamma(c, b, a) = gamma(c, a, b);
      }
  return gamma;
}

Mat<double> lie_derivative_metric(const MetricPatch& patch, const VectorField& V,
                                  const ChartPoint& x) {
  const int n = patch.dim();
  Mat<Jet> g = patch.jets(x, 1);
  const JetSpace& sp1 = JetSpace::get(n, 1);
  auto vjets = V.eval_jets(sp1, x.coords);

  // V_j = g_jk V^k as order-1 jets; then
  // (L_V g)_ij = d_i V_j + d_j V_i - 2 Gamma^k_ij V_k.
  std::vector<Jet> vlow(n, Jet(sp1, 0.0));
  for (int j = 0; j < n; ++j) {
    Jet s(sp1, 0.0);
    for (int k = 0; k < n; ++k) s += g(j, k).truncated(1) * vjets[k];
    vlow[j] = s;
  }
  Tensor3<double> gamma = christoffel_at(patch, x);
  Mat<double> out(n, 0.0);
  for (int i = 0; i < n; ++i)
    for (int j = i; j < n; ++j) {
      double s = vlow[j].d(i).value() + vlow[i].d(j).value();
      for (int k = 0; k < n; ++k) s -= 2.0 * gamma(k, i, j) * vlow[k].value();
      out(i, j) = out(j, i) = s;
    }
  return out;
}

std::function<void(JetVars, std::span<Jet>)> metric_dual(const MetricPatch& patch,
                                                         const VectorField& V) {
  const int n = patch.dim();
  MetricFn eval = [p = patch](JetVars vars, Mat<Jet>& out) { p.eval(vars, out); };
  return [eval, V, n](JetVars vars, std::span<Jet> out) {
    Mat<Jet> g(n, Jet(vars[0].space(), 0.0));
    eval(vars, g);
    std::vector<Jet> v(n, Jet(vars[0].space(), 0.0));
    V.fn(vars, v);
    for (int j = 0; j < n; ++j) {
      Jet s(vars[0].space(), 0.0);
      for (int k = 0; k < n; ++k) s += g(j, k) * v[k];
      out[j] = s;
    }
  };
}

}  // namespace pem
