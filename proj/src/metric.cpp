#include "pem/metric.hpp"

#include <cmath>

namespace pem {

Mat<double> MetricPatch::components(const ChartPoint& x) const {
  domain_.require(x);
  const JetSpace& sp = JetSpace::get(dim_, 0);
  auto vars = seed_variables(sp, x.coords);
  Mat<Jet> out(dim_, Jet(sp, 0.0));
  fn_(vars, out);
  Mat<double> g(dim_, 0.0);
  for (int i = 0; i < dim_; ++i)
    for (int j = 0; j < dim_; ++j) g(i, j) = out(i, j).value();
  return g;
}

Mat<Jet> MetricPatch::jets(const ChartPoint& x, int order, JetMode mode) const {
  domain_.require(x);
  if (order > max_jet_order_) {
    throw JetUnavailable("jet order " + std::to_string(order) +
                         " exceeds provider limit " + std::to_string(max_jet_order_));
  }
  if (mode == JetMode::finite_difference) {
    return finite_difference_jets(*this, x, order);
  }
  const JetSpace& sp = JetSpace::get(dim_, order);
  auto vars = seed_variables(sp, x.coords);
  Mat<Jet> out(dim_, Jet(sp, 0.0));
  fn_(vars, out);
  return out;
}

MetricAtPoint metric_eval(const MetricPatch& patch, const ChartPoint& x) {
  Mat<double> g = patch.components(x);
  const double det = matrix_determinant(g, 1.0);
  if (std::abs(det) < 1e-14) {
    throw SingularMetric("metric determinant " + std::to_string(det) + " at sample point");
  }
  Mat<double> ginv = matrix_inverse(g, 0.0, 1.0);
  return {std::move(g), std::move(ginv)};
}

Mat<Jet> finite_difference_jets(const MetricPatch& patch, const ChartPoint& x,
                                int order) {
  if (order > 2) {
    throw JetUnavailable("finite-difference jets support order <= 2");
  }
  const int m = patch.dim();
  const JetSpace& sp = JetSpace::get(m, order);

  auto eval = [&](const std::vector<double>& coords) {
    // Stencil points may step over an excluded locus; domain enforcement
    // stays with the caller's sample point.
    const JetSpace& sp0 = JetSpace::get(m, 0);
    auto vars = seed_variables(sp0, coords);
    Mat<Jet> out(m, Jet(sp0, 0.0));
    patch.eval(vars, out);
    Mat<double> g(m, 0.0);
    for (int i = 0; i < m; ++i)
      for (int j = 0; j < m; ++j) g(i, j) = out(i, j).value();
    return g;
  };

  std::vector<double> h(m);
  for (int i = 0; i < m; ++i) h[i] = 2e-3 * std::max(std::abs(x.coords[i]), 0.5);

  const Mat<double> g0 = eval(x.coords);
  std::vector<Mat<double>> gp(m, Mat<double>(m, 0.0)), gm(m, Mat<double>(m, 0.0));
  if (order >= 1) {
    for (int a = 0; a < m; ++a) {
      auto xp = x.coords, xm = x.coords;
      xp[a] += h[a];
      xm[a] -= h[a];
      gp[a] = eval(xp);
      gm[a] = eval(xm);
    }
  }

  Mat<Jet> out(m, Jet(sp, 0.0));
  std::vector<std::vector<double>> partials(
      static_cast<std::size_t>(m) * m, std::vector<double>(sp.size(), 0.0));
  auto slot = [&](int i, int j) -> std::vector<double>& {
    return partials[static_cast<std::size_t>(i) * m + j];
  };
  std::vector<std::uint8_t> e(m, 0);

  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j) slot(i, j)[0] = g0(i, j);

  if (order >= 1) {
    for (int a = 0; a < m; ++a) {
      std::fill(e.begin(), e.end(), 0);
      e[a] = 1;
      const int idx = sp.index_of(e);
      for (int i = 0; i < m; ++i)
        for (int j = 0; j < m; ++j)
          slot(i, j)[idx] = (gp[a](i, j) - gm[a](i, j)) / (2.0 * h[a]);
    }
  }
  if (order >= 2) {
    for (int a = 0; a < m; ++a) {
      std::fill(e.begin(), e.end(), 0);
      e[a] = 2;
      const int idx = sp.index_of(e);
      for (int i = 0; i < m; ++i)
        for (int j = 0; j < m; ++j)
          slot(i, j)[idx] =
              (gp[a](i, j) - 2.0 * g0(i, j) + gm[a](i, j)) / (h[a] * h[a]);
      for (int b = a + 1; b < m; ++b) {
        auto xpp = x.coords, xpm = x.coords, xmp = x.coords, xmm = x.coords;
        xpp[a] += h[a]; xpp[b] += h[b];
        xpm[a] += h[a]; xpm[b] -= h[b];
        xmp[a] -= h[a]; xmp[b] += h[b];
        xmm[a] -= h[a]; xmm[b] -= h[b];
        const Mat<double> gpp = eval(xpp), gpm = eval(xpm), gmp = eval(xmp),
                          gmm = eval(xmm);
        std::fill(e.begin(), e.end(), 0);
        e[a] = 1;
        e[b] = 1;
        const int idx = sp.index_of(e);
        for (int i = 0; i < m; ++i)
          for (int j = 0; j < m; ++j)
            slot(i, j)[idx] = (gpp(i, j) - gpm(i, j) - gmp(i, j) + gmm(i, j)) /
                              (4.0 * h[a] * h[b]);
      }
    }
  }

  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j) out(i, j) = Jet::from_partials(sp, slot(i, j));
  return out;
}

std::vector<Jet> reseed_variables(JetVars vars, int order) {
  const JetSpace& sp = JetSpace::get(static_cast<int>(vars.size()), order);
  std::vector<double> coords(vars.size());
  for (std::size_t i = 0; i < vars.size(); ++i) coords[i] = vars[i].value();
  return seed_variables(sp, coords);
}

MetricPatch pullback_metric(const MetricPatch& target, CoordMapFn map, int new_dim,
                            Signature sig, Domain domain, std::string chart_id) {
  const int old_dim = target.dim();
  MetricFn fn = [t = target, map, new_dim, old_dim](JetVars vars, Mat<Jet>& out) {
    const int order = vars[0].space().order();
    auto up = reseed_variables(vars, order + 1);
    auto old_vars = map(up);
    const JetSpace& upsp = up[0].space();
    Mat<Jet> gold(old_dim, Jet(upsp, 0.0));
    t.eval(old_vars, gold);
    // Jacobian entries live one order down, matching the caller's order.
    std::vector<std::vector<Jet>> jac(
        old_dim, std::vector<Jet>(new_dim, Jet(JetSpace::get(new_dim, order), 0.0)));
    for (int c = 0; c < old_dim; ++c)
      for (int a = 0; a < new_dim; ++a) jac[c][a] = old_vars[c].d(a);
    const Jet z(JetSpace::get(new_dim, order), 0.0);
    for (int a = 0; a < new_dim; ++a)
      for (int b = a; b < new_dim; ++b) {
        Jet s = z;
        for (int c = 0; c < old_dim; ++c)
          for (int d = 0; d < old_dim; ++d) {
            s += jac[c][a] * jac[d][b] * gold(c, d);
          }
        out(a, b) = s;
        if (b != a) out(b, a) = s;
      }
  };
  return MetricPatch(new_dim, sig, std::move(chart_id), std::move(domain), fn,
                     target.max_jet_order() - 1);
}

}  // namespace pem
