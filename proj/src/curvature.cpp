#include "pem/curvature.hpp"

#include <cmath>

namespace pem {

namespace {

std::vector<int> all_dirs(int n) {
  std::vector<int> d(n);
  for (int i = 0; i < n; ++i) d[i] = i;
  return d;
}

}  // namespace

JetCurvature curvature_from_jets(const Mat<Jet>& g, const std::vector<int>& dirs) {
  const int n = g.n();
  const JetSpace& sp = g(0, 0).space();
  const int k = sp.order();
  if (k < 2) throw JetUnavailable("curvature needs metric jets of order >= 2");
  const Jet zk(sp, 0.0);
  const Jet zk1(JetSpace::get(sp.dim(), k - 1), 0.0);
  const Jet zk2(JetSpace::get(sp.dim(), k - 2), 0.0);

  JetCurvature out{g, Mat<Jet>(), Tensor3<Jet>(n, zk1), Tensor4<Jet>(n, zk2),
                   Mat<Jet>(n, zk2), zk2};
  out.g_inv = matrix_inverse(g, zk, Jet(sp, 1.0), 1e-14);

  // dg(a,i,j) = d_a g_ij
  Tensor3<Jet> dg(n, zk1);
  for (int a = 0; a < n; ++a)
    for (int i = 0; i < n; ++i)
      for (int j = i; j < n; ++j) {
        dg(a, i, j) = g(i, j).d(dirs[a]);
        if (j != i) dg(a, j, i) = dg(a, i, j);
      }

  for (int c = 0; c < n; ++c)
    for (int a = 0; a < n; ++a)
      for (int b = a; b < n; ++b) {
        Jet s = zk1;
        for (int d = 0; d < n; ++d) {
          s += out.g_inv(c, d) * (dg(a, d, b) + dg(b, d, a) - dg(d, a, b));
        }
        out.christoffel(c, a, b) = s * 0.5;
        if (b != a) out.christoffel(c, b, a) = out.christoffel(c, a, b);
      }

  // Riemann with the index order R^c_{d ab}; lowered afterwards.
  Tensor4<Jet> riem_up(n, zk2);
  for (int c = 0; c < n; ++c)
    for (int d = 0; d < n; ++d)
      for (int a = 0; a < n; ++a)
        for (int b = a + 1; b < n; ++b) {
          Jet s = out.christoffel(c, b, d).d(dirs[a]) -
                  out.christoffel(c, a, d).d(dirs[b]);
          for (int e = 0; e < n; ++e) {
            s += out.christoffel(c, a, e) * out.christoffel(e, b, d) -
                 out.christoffel(c, b, e) * out.christoffel(e, a, d);
          }
          riem_up(c, d, a, b) = s;
          riem_up(c, d, b, a) = -s;
        }

  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b) {
          Jet s = zk2;
          for (int c = 0; c < n; ++c) s += g(i, c).truncated(k - 2) * riem_up(c, j, a, b);
          out.riemann(i, j, a, b) = s;
        }

  for (int s_i = 0; s_i < n; ++s_i)
    for (int s_j = s_i; s_j < n; ++s_j) {
      Jet s = zk2;
      for (int m = 0; m < n; ++m) s += riem_up(m, s_i, m, s_j);
      out.ricci(s_i, s_j) = s;
      if (s_j != s_i) out.ricci(s_j, s_i) = s;
    }

  Jet sc = zk2;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) sc += out.g_inv(i, j).truncated(k - 2) * out.ricci(i, j);
  out.scalar = sc;
  return out;
}

CurvatureAtPoint curvature(const MetricPatch& patch, const ChartPoint& x, JetMode mode) {
  const int n = patch.dim();
  Mat<Jet> g = patch.jets(x, 2, mode);
  JetCurvature jc = curvature_from_jets(g, all_dirs(n));
  CurvatureAtPoint out{Tensor3<double>(n, 0.0), Tensor4<double>(n, 0.0),
                       Mat<double>(n, 0.0), jc.scalar.value()};
  for (int c = 0; c < n; ++c)
    for (int a = 0; a < n; ++a)
      for (int b = 0; b < n; ++b)
        out.christoffel(c, a, b) = jc.christoffel(c, a, b).value();
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      out.ricci(i, j) = jc.ricci(i, j).value();
      for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b)
          out.riemann_lowered(i, j, a, b) = jc.riemann(i, j, a, b).value();
    }
  return out;
}

ConformalCurvatureAtPoint conformal_curvature(const MetricPatch& patch,
                                              const ChartPoint& x) {
  const int n = patch.dim();
  if (n < 3) throw DimensionUnsupported("Weyl/Schouten need dimension >= 3");
  const bool want_bach = (n == 4);
  const int order = want_bach ? 4 : 3;
  Mat<Jet> g = patch.jets(x, order);
  const auto dirs = all_dirs(n);
  JetCurvature jc = curvature_from_jets(g, dirs);

  const int kp = order - 2;  // schouten order
  const Jet zp(JetSpace::get(n, kp), 0.0);
  Mat<Jet> P(n, zp);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      P(i, j) = (jc.ricci(i, j) -
                 jc.scalar * g(i, j).truncated(kp) * (1.0 / (2.0 * (n - 1)))) *
                (1.0 / (n - 2));
    }

  // Cotton C(a,b,c) = grad_a P_bc - grad_b P_ac.
  const Jet zc(JetSpace::get(n, kp - 1), 0.0);
  auto grad_P = [&](int a, int b, int c) {
    Jet s = P(b, c).d(dirs[a]);
    for (int e = 0; e < n; ++e) {
      s -= jc.christoffel(e, a, b) * P(e, c) + jc.christoffel(e, a, c) * P(b, e);
    }
    return s;
  };
  Tensor3<Jet> C(n, zc);
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b)
      for (int c = 0; c < n; ++c) C(a, b, c) = grad_P(a, b, c) - grad_P(b, a, c);

  Tensor4<Jet> W(n, zp);
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b)
      for (int c = 0; c < n; ++c)
        for (int d = 0; d < n; ++d) {
          const Jet kn = g(a, c).truncated(kp) * P(b, d) -
                         g(a, d).truncated(kp) * P(b, c) +
                         g(b, d).truncated(kp) * P(a, c) -
                         g(b, c).truncated(kp) * P(a, d);
          W(a, b, c, d) = jc.riemann(a, b, c, d).truncated(kp) - kn;
        }

  ConformalCurvatureAtPoint out;
  out.schouten = Mat<double>(n, 0.0);
  out.cotton = Tensor3<double>(n, 0.0);
  out.weyl_lowered = Tensor4<double>(n, 0.0);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      out.schouten(i, j) = P(i, j).value();
      for (int a = 0; a < n; ++a) {
        out.cotton(i, j, a) = C(i, j, a).value();
        for (int b = 0; b < n; ++b) out.weyl_lowered(i, j, a, b) = W(i, j, a, b).value();
      }
    }

  if (want_bach) {
    // B_ab = grad^c C_cab + P^cd W_cabd.
    Mat<double> bach(n, 0.0);
    Mat<double> ginv0(n, 0.0);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) ginv0(i, j) = jc.g_inv(i, j).value();
    Mat<double> P_up(n, 0.0);
    for (int c = 0; c < n; ++c)
      for (int d = 0; d < n; ++d) {
        double s = 0.0;
        for (int e = 0; e < n; ++e)
          for (int f = 0; f < n; ++f) s += ginv0(c, e) * ginv0(d, f) * P(e, f).value();
        P_up(c, d) = s;
      }
    for (int a = 0; a < n; ++a)
      for (int b = 0; b < n; ++b) {
        double s = 0.0;
        for (int d = 0; d < n; ++d) {
          for (int c = 0; c < n; ++c) {
            // grad_d C_cab
            double gc = C(c, a, b).d(dirs[d]).value();
            for (int e = 0; e < n; ++e) {
              gc -= jc.christoffel(e, d, c).value() * C(e, a, b).value() +
                    jc.christoffel(e, d, a).value() * C(c, e, b).value() +
                    jc.christoffel(e, d, b).value() * C(c, a, e).value();
            }
            s += ginv0(d, c) * gc;
          }
        }
        double pw = 0.0;
        for (int c = 0; c < n; ++c)
          for (int d = 0; d < n; ++d) pw += P_up(c, d) * W(c, a, b, d).value();
        bach(a, b) = s + pw;
      }
    out.bach = std::move(bach);
  }
  return out;
}

double einstein_divergence_residual(const MetricPatch& patch, const ChartPoint& x) {
  const int n = patch.dim();
  Mat<Jet> g = patch.jets(x, 3);
  const auto dirs = all_dirs(n);
  JetCurvature jc = curvature_from_jets(g, dirs);
  // G_ij = Ric_ij - 1/2 Sc g_ij, order 1 jets.
  const Jet z1(JetSpace::get(n, 1), 0.0);
  Mat<Jet> G(n, z1);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      G(i, j) = jc.ricci(i, j) - jc.scalar * g(i, j).truncated(1) * 0.5;

  double worst = 0.0;
  for (int j = 0; j < n; ++j) {
    double div = 0.0;
    for (int k = 0; k < n; ++k)
      for (int i = 0; i < n; ++i) {
        double gkG = G(i, j).d(dirs[k]).value();
        for (int e = 0; e < n; ++e) {
          gkG -= jc.christoffel(e, k, i).value() * G(e, j).value() +
                 jc.christoffel(e, k, j).value() * G(i, e).value();
        }
        div += jc.g_inv(k, i).value() * gkG;
      }
    worst = std::max(worst, std::abs(div));
  }
  return worst;
}

}  // namespace pem
