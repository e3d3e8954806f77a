#include "pem/checks.hpp"

#include <array>
#include <cmath>
#include <cstdlib>
#include <mutex>
#include <thread>

namespace pem {

namespace {

// Evaluate f(i) for i in [0, n); workers stride over indices, results land by
// index, reductions happen afterwards in index order.
template <typename F>
std::vector<double> parallel_map(int n, F&& f) {
  std::vector<double> out(n, 0.0);
  const int workers = std::min(worker_count(), std::max(n, 1));
  if (workers <= 1) {
    for (int i = 0; i < n; ++i) out[i] = f(i);
    return out;
  }
  std::vector<std::thread> pool;
  std::exception_ptr first_error;
  std::mutex err_mu;
  pool.reserve(workers);
  for (int w = 0; w < workers; ++w) {
    pool.emplace_back([&, w]() {
      try {
        for (int i = w; i < n; i += workers) out[i] = f(i);
      } catch (...) {
        std::lock_guard<std::mutex> lock(err_mu);
        if (!first_error) first_error = std::current_exception();
      }
    });
  }
  for (auto& t : pool) t.join();
  if (first_error) std::rethrow_exception(first_error);
  return out;
}

double matrix_residual(const Mat<double>& diff, const Mat<double>* ginv,
                       ResidualNorm norm) {
  const int n = diff.n();
  double worst = 0.0;
  if (norm == ResidualNorm::component || ginv == nullptr) {
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) worst = std::max(worst, std::abs(diff(i, j)));
    return worst;
  }
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      double s = 0.0;
      for (int k = 0; k < n; ++k) s += (*ginv)(i, k) * diff(k, j);
      worst = std::max(worst, std::abs(s));
    }
  return worst;
}

ChartPoint make_point(const std::vector<double>& c, const MetricPatch& patch) {
  return ChartPoint{c, patch.chart_id()};
}

}  // namespace

int worker_count() {
  if (const char* env = std::getenv("EF_THREADS")) {
    const int v = std::atoi(env);
    if (v >= 1) return v;
  }
  const unsigned hc = std::thread::hardware_concurrency();
  return static_cast<int>(std::min(4u, hc == 0 ? 1u : hc));
}

CheckReport check_einstein(const MetricPatch& patch, double lambda,
                           const SamplePlan& plan, double tol, ResidualNorm norm,
                           JetMode mode, const std::string& name) {
  auto pts = sample_coords(patch.domain(), plan);
  auto residuals = parallel_map(static_cast<int>(pts.size()), [&](int i) {
    const ChartPoint x = make_point(pts[i], patch);
    auto curv = curvature(patch, x, mode);
    auto m = metric_eval(patch, x);
    Mat<double> diff(patch.dim(), 0.0);
    for (int a = 0; a < patch.dim(); ++a)
      for (int b = 0; b < patch.dim(); ++b)
        diff(a, b) = curv.ricci(a, b) - lambda * m.g(a, b);
    return matrix_residual(diff, &m.g_inv, norm);
  });
  return CheckReport::from_residuals(
      name, residuals, tol,
      std::string("jets=") +
          (mode == JetMode::analytic ? "analytic" : "finite-difference"));
}

CheckReport check_flatness(const MetricPatch& patch, const SamplePlan& plan,
                           double tol, const std::string& name) {
  auto pts = sample_coords(patch.domain(), plan);
  const int n = patch.dim();
  auto residuals = parallel_map(static_cast<int>(pts.size()), [&](int i) {
    auto curv = curvature(patch, make_point(pts[i], patch));
    double worst = 0.0;
    for (int a = 0; a < n; ++a)
      for (int b = 0; b < n; ++b)
        for (int c = 0; c < n; ++c)
          for (int d = 0; d < n; ++d)
            worst = std::max(worst, std::abs(curv.riemann_lowered(a, b, c, d)));
    return worst;
  });
  return CheckReport::from_residuals(name, residuals, tol);
}

std::vector<CheckReport> check_ambient_conditions(const ProductAmbientSpec& amb,
                                                  const SamplePlan& plan, double tol,
                                                  const std::string& name) {
  const MetricPatch& h = amb.ambient_patch;
  const int dim = h.dim();
  const int tc = amb.t_coord();
  const int rc = amb.rho_coord();
  auto pts = sample_coords(h.domain(), plan);
  const int npts = static_cast<int>(pts.size());

  auto homothety = parallel_map(npts, [&](int i) {
    const ChartPoint x = make_point(pts[i], h);
    auto lie = lie_derivative_metric(h, amb.euler_field, x);
    auto m = metric_eval(h, x);
    double worst = 0.0;
    for (int a = 0; a < dim; ++a)
      for (int b = 0; b < dim; ++b)
        worst = std::max(worst, std::abs(lie(a, b) - 2.0 * m.g(a, b)));
    return worst;
  });

  // boundary samples: rho = 0, t free
  const MetricPatch bpatch = product_metric(amb.g1, amb.g2);
  auto boundary = parallel_map(npts, [&](int i) {
    auto c = pts[i];
    c[rc] = 0.0;
    const ChartPoint x = make_point(c, h);
    auto hg = h.components(x);
    const double t = c[tc];
    // tautological form on boundary directions
    std::vector<double> bc(c.begin(), c.begin() + amb.n());
    Mat<double> gb(amb.n(), 0.0);
    if (amb.n() > 0) {
      gb = bpatch.components(ChartPoint{bc, bpatch.chart_id()});
    }
    double worst = 0.0;
    for (int a = 0; a < amb.n(); ++a)
      for (int b = 0; b < amb.n(); ++b)
        worst = std::max(worst, std::abs(hg(a, b) - t * t * gb(a, b)));
    worst = std::max(worst, std::abs(hg(tc, tc)));  // 2 rho dt^2 vanishes
    for (int a = 0; a < amb.n(); ++a) worst = std::max(worst, std::abs(hg(tc, a)));
    return worst;
  });

  auto ricci = parallel_map(npts, [&](int i) {
    auto curv = curvature(h, make_point(pts[i], h));
    double worst = 0.0;
    for (int a = 0; a < dim; ++a)
      for (int b = 0; b < dim; ++b)
        worst = std::max(worst, std::abs(curv.ricci(a, b)));
    return worst;
  });

  return {CheckReport::from_residuals(name + "-homothety", homothety, tol),
          CheckReport::from_residuals(name + "-boundary", boundary, tol),
          CheckReport::from_residuals(name + "-ricciflat", ricci, tol)};
}

CheckReport check_coordinate_equivalence(const ConeProductSpec& cp,
                                         const ProductAmbientSpec& amb,
                                         const SamplePlan& plan, double tol) {
  const double lambda = cp.lambda.value();
  const double mu = amb.mu.value();
  if (std::abs(lambda - 2.0 * mu) > 1e-15) {
    throw LambdaMismatch("coordinate equivalence needs lambda = 2 mu (got lambda=" +
                         format_double(lambda) + ", mu=" + format_double(mu) + ")");
  }
  const int n = amb.n();
  // (x, t, rho) -> (x, s1, s2) with s_{1,2} = (2 mu)^{-1/2} t (1 +/- mu rho)
  CoordMapFn map = [n, mu](JetVars vars) {
    std::vector<Jet> old(vars.begin(), vars.begin() + n);
    const Jet& t = vars[n];
    const Jet& rho = vars[n + 1];
    const double inv_sqrt = 1.0 / std::sqrt(2.0 * mu);
    old.push_back((t + t * rho * mu) * inv_sqrt);
    old.push_back((t - t * rho * mu) * inv_sqrt);
    return old;
  };
  // restrict to points whose image stays in the positive quadrant
  Domain dom = amb.ambient_patch.domain();
  const int rc = amb.rho_coord();
  dom.box[rc] = {-0.9 / mu, 0.9 / mu};
  MetricPatch pulled = pullback_metric(cp.product_patch, map, n + 2,
                                       amb.ambient_patch.signature(), dom,
                                       "pulled-cone-product");

  auto pts = sample_coords(dom, plan);
  const MetricPatch& h = amb.ambient_patch;
  auto residuals = parallel_map(static_cast<int>(pts.size()), [&](int i) {
    const ChartPoint x = make_point(pts[i], h);
    auto a = pulled.components(x);
    auto b = h.components(x);
    double worst = 0.0;
    for (int p = 0; p < n + 2; ++p)
      for (int q = 0; q < n + 2; ++q)
        worst = std::max(worst, std::abs(a(p, q) - b(p, q)));
    return worst;
  });
  return CheckReport::from_residuals("cone-equivalence", residuals, tol);
}

CheckReport check_coord_roundtrip(double lambda, const SamplePlan& plan, double tol) {
  std::vector<double> residuals(plan.count, 0.0);
  for (int i = 0; i < plan.count; ++i) {
    const double s1 = 0.2 + 3.0 * uniform01(plan.seed, i, 0);
    const double s2 = 0.2 + 3.0 * uniform01(plan.seed, i, 1);
    auto [t, rho] = cone_coords_to_trho(s1, s2, lambda);
    auto [r1, r2] = cone_coords_to_s(t, rho, lambda);
    residuals[i] = std::max(std::abs(r1 - s1), std::abs(r2 - s2));
  }
  return CheckReport::from_residuals("coord-roundtrip", residuals, tol);
}

CheckReport check_homothety_gradient(const MetricPatch& patch, const VectorField& V,
                                     double alpha, const SamplePlan& plan, double tol,
                                     const std::string& name) {
  auto pts = sample_coords(patch.domain(), plan);
  const int dim = patch.dim();
  FormField vdual{dim, 1, metric_dual(patch, V)};
  FormField dvdual = exterior_d(vdual);
  auto residuals = parallel_map(static_cast<int>(pts.size()), [&](int i) {
    const ChartPoint x = make_point(pts[i], patch);
    auto lie = lie_derivative_metric(patch, V, x);
    auto m = metric_eval(patch, x);
    double worst = 0.0;
    for (int a = 0; a < dim; ++a)
      for (int b = 0; b < dim; ++b)
        worst = std::max(worst, std::abs(lie(a, b) - alpha * m.g(a, b)));
    for (double c : dvdual.eval(x.coords)) worst = std::max(worst, std::abs(c));
    return worst;
  });
  return CheckReport::from_residuals(name, residuals, tol);
}

CheckReport check_dilation_invariance(const EinsteinSpec& g1, const EinsteinSpec& g2,
                                      double alpha, const SamplePlan& plan,
                                      double tol) {
  if (alpha <= 0.0) throw ZeroScale("dilation invariance needs alpha > 0");
  auto mu1 = solve_mu(g1.m, g1.sc, g2.m, g2.sc);
  ProductAmbientSpec amb1 = ambient_metric(g1, g2, mu1);
  EinsteinSpec s1 = scale_metric(g1, alpha);
  EinsteinSpec s2 = scale_metric(g2, alpha);
  auto mu2 = solve_mu(s1.m, s1.sc, s2.m, s2.sc);
  ProductAmbientSpec amb2 = ambient_metric(s1, s2, mu2);

  const int n = amb1.n();
  const double root = std::sqrt(alpha);
  // identification (x, t, rho) -> (x, t / sqrt(alpha), alpha rho)
  CoordMapFn map = [n, root, alpha](JetVars vars) {
    std::vector<Jet> old(vars.begin(), vars.begin() + n);
    old.push_back(vars[n] * (1.0 / root));
    old.push_back(vars[n + 1] * alpha);
    return old;
  };
  Domain dom = amb1.ambient_patch.domain();
  // keep images inside amb2's rho range
  const int rc = amb1.rho_coord();
  dom.box[rc] = {dom.box[rc].first / std::max(alpha, 1.0),
                 dom.box[rc].second / std::max(alpha, 1.0)};
  MetricPatch pulled = pullback_metric(amb2.ambient_patch, map, n + 2,
                                       amb1.ambient_patch.signature(), dom,
                                       "dilated-ambient");

  auto pts = sample_coords(dom, plan);
  auto residuals = parallel_map(static_cast<int>(pts.size()), [&](int i) {
    const ChartPoint x = make_point(pts[i], amb1.ambient_patch);
    auto a = pulled.components(x);
    auto b = amb1.ambient_patch.components(x);
    double worst = 0.0;
    for (int p = 0; p < n + 2; ++p)
      for (int q = 0; q < n + 2; ++q)
        worst = std::max(worst, std::abs(a(p, q) - b(p, q)));
    return worst;
  });
  return CheckReport::from_residuals("dilation-invariance", residuals, tol);
}

CheckReport check_special_killing(const KillingFormSpec& k, const SamplePlan& plan,
                                  double tol) {
  const MetricPatch& patch = k.source.interior_patch;
  const int dim = patch.dim();
  auto pts = sample_coords(patch.domain(), plan);
  const int npts = static_cast<int>(pts.size());
  const int rc = k.source.r_coord();

  VectorField gsharp = sharp(patch, k.gamma);
  FormField iota_gs = interior_product(gsharp, k.psi);

  // piece residuals per sample, reduced in index order afterwards
  std::vector<std::array<double, 5>> pieces(npts);
  auto worst_of = parallel_map(npts, [&](int i) {
    const ChartPoint x = make_point(pts[i], patch);
    // (a), (b): defining equations along coordinate directions plus seeded Y
    double a = 0.0, b = 0.0;
    std::vector<double> Y(dim, 0.0);
    for (int d = 0; d < dim; ++d) {
      std::fill(Y.begin(), Y.end(), 0.0);
      Y[d] = 1.0;
      auto res = special_killing_residuals(patch, k.psi, k.killing_constant, Y, x);
      a = std::max(a, res.killing);
      b = std::max(b, res.second);
    }
    for (int d = 0; d < dim; ++d) {
      Y[d] = 2.0 * uniform01(plan.seed, i, 100 + d) - 1.0;
    }
    auto res = special_killing_residuals(patch, k.psi, k.killing_constant, Y, x);
    a = std::max(a, res.killing);
    b = std::max(b, res.second);

    // (c) iota_{gamma#} psi = 0
    double c = 0.0;
    for (double v : iota_gs.eval(x.coords)) c = std::max(c, std::abs(v));

    // (d) |gamma#|^2 > 1
    const double d_resid = std::max(0.0, 1.0 - form_norm2(patch, k.gamma, x));

    // (e) |psi|^2 = h1^2
    const double h1 = k.h1(x.coords[rc]);
    const double e = std::abs(form_norm2(patch, k.psi, x) - h1 * h1);
    pieces[i] = {a, b, c, d_resid, e};
    return std::max({a, b, c, d_resid, e});
  });

  std::array<double, 5> top{};
  for (const auto& p : pieces)
    for (int j = 0; j < 5; ++j) top[j] = std::max(top[j], p[j]);
  std::string notes = "a=" + format_double(top[0]) + ";b=" + format_double(top[1]) +
                      ";c=" + format_double(top[2]) + ";d=" + format_double(top[3]) +
                      ";e=" + format_double(top[4]);
  return CheckReport::from_residuals("special-killing", worst_of, tol, notes);
}

CheckReport check_bach_vanishing(const MetricPatch& patch, const SamplePlan& plan,
                                 double tol, const std::string& name) {
  if (patch.dim() != 4) {
    throw DimensionUnsupported("Bach check needs a 4-dimensional patch");
  }
  auto pts = sample_coords(patch.domain(), plan);
  auto residuals = parallel_map(static_cast<int>(pts.size()), [&](int i) {
    auto cc = conformal_curvature(patch, make_point(pts[i], patch));
    double worst = 0.0;
    for (int a = 0; a < 4; ++a)
      for (int b = 0; b < 4; ++b) worst = std::max(worst, std::abs((*cc.bach)(a, b)));
    return worst;
  });
  return CheckReport::from_residuals(name, residuals, tol);
}

namespace {

// Reparametrized flow: Phi_s = flow of v for time tau(s) = -(2/c) ln(1-(c/2)s),
// so that the drag factor (1 - (c/2)s) is exact.
double drag_tau(double s, double c) { return -(2.0 / c) * std::log(1.0 - 0.5 * c * s); }

struct FlowMap {
  // point after flowing for parameter s, plus the flow derivative
  std::function<std::pair<std::vector<double>, Mat<double>>(const std::vector<double>&,
                                                            double)> apply;
};

FlowMap make_flow(const TransportProbe& probe, int dim) {
  if (probe.scaling_coord >= 0) {
    const int k = probe.scaling_coord;
    const double c = probe.c;
    return {[k, c, dim](const std::vector<double>& x, double s) {
      const double f = std::exp(drag_tau(s, c));
      auto y = x;
      y[k] *= f;
      Mat<double> J(dim, 0.0);
      for (int i = 0; i < dim; ++i) J(i, i) = (i == k) ? f : 1.0;
      return std::make_pair(y, J);
    }};
  }
  VectorField v = probe.v;
  const double c = probe.c;
  return {[v, c](const std::vector<double>& x, double s) {
    auto res = flow_with_jacobian(v, x, drag_tau(s, c));
    return std::make_pair(res.point, res.jacobian);
  }};
}

}  // namespace

CheckReport check_drag_lemma(const MetricPatch& patch, const TransportProbe& probe,
                             int t_grid, int s_grid, double s_max, double tol) {
  const int dim = patch.dim();
  FlowMap flow = make_flow(probe, dim);

  // coordinate frame at the loop start
  std::vector<std::vector<double>> frame(dim, std::vector<double>(dim, 0.0));
  for (int i = 0; i < dim; ++i) frame[i][i] = 1.0;

  std::vector<double> residuals;
  residuals.reserve(static_cast<std::size_t>(t_grid) * s_grid);
  for (int ti = 0; ti < t_grid; ++ti) {
    const double t = static_cast<double>(ti) / t_grid;
    // transport the frame along the loop up to parameter t
    std::vector<std::vector<double>> Ft = frame;
    if (ti > 0) {
      PathSpec seg{[&probe, t](double u) { return probe.loop.curve(u * t); }, false,
                   std::nullopt};
      if (probe.loop.velocity) {
        seg.velocity = [&probe, t](double u) {
          auto v = (*probe.loop.velocity)(u * t);
          for (auto& c : v) c *= t;
          return v;
        };
      }
      Ft = parallel_transport(patch, seg, frame).frame;
    }
    const ChartPoint base = probe.loop.curve(t);

    for (int sj = 1; sj <= s_grid; ++sj) {
      const double s = s_max * sj / s_grid;
      // path 1: parallel transport along the flow line, parametrized by s
      PathSpec fl{[&flow, &base, s](double u) {
                    auto [pt, J] = flow.apply(base.coords, u * s);
                    return ChartPoint{pt, base.chart_id};
                  },
                  false, std::nullopt};
      auto transported = parallel_transport(patch, fl, Ft).frame;
      // path 2: homothetic dragging
      auto [endpt, J] = flow.apply(base.coords, s);
      const double factor = 1.0 - 0.5 * probe.c * s;
      double worst = 0.0;
      for (int a = 0; a < dim; ++a) {
        for (int i = 0; i < dim; ++i) {
          double dragged = 0.0;
          for (int j = 0; j < dim; ++j) dragged += J(i, j) * Ft[a][j];
          dragged *= factor;
          worst = std::max(worst, std::abs(transported[a][i] - dragged));
        }
      }
      residuals.push_back(worst);
    }
  }
  return CheckReport::from_residuals("drag-lemma", residuals, tol);
}

CheckReport check_transverse_holonomy(const MetricPatch& patch,
                                      const TransportProbe& probe, double tol) {
  const int dim = patch.dim();
  const int k = probe.transverse_coord;
  const double level = probe.transverse_value;
  {
    const ChartPoint q = probe.loop.curve(0.0);
    if (std::abs(q.coords[k] - level) > 1e-12) {
      throw ProjectionUndefined("loop base point is not on the transverse hypersurface");
    }
  }

  auto project = [&](double t) {
    ChartPoint p = probe.loop.curve(t);
    if (probe.scaling_coord == k) {
      if (p.coords[k] * level <= 0.0) {
        throw ProjectionUndefined("flow line misses the hypersurface");
      }
      p.coords[k] = level;
      return p;
    }
    // generic: bisect the flow time until x_k hits the level
    const VectorField& v = probe.v;
    const double f0 = p.coords[k] - level;
    if (f0 == 0.0) return p;
    const double step = (f0 > 0) ? -0.1 : 0.1;
    double prev = 0.0, tau = step;
    bool bracketed = false;
    for (int it = 0; it < 200 && !bracketed; ++it) {
      auto r = flow_with_jacobian(v, p.coords, tau);
      const double f = r.point[k] - level;
      if (f == 0.0 || f * f0 < 0.0) {
        bracketed = true;
        break;
      }
      prev = tau;
      tau += step;
    }
    if (!bracketed) throw ProjectionUndefined("flow line misses the hypersurface");
    double lo = prev, hi = tau;  // sign(f(lo)) == sign(f0)
    for (int it = 0; it < 80; ++it) {
      const double mid = 0.5 * (lo + hi);
      auto r = flow_with_jacobian(v, p.coords, mid);
      if ((r.point[k] - level) * f0 > 0.0) {
        lo = mid;
      } else {
        hi = mid;
      }
    }
    auto r = flow_with_jacobian(v, p.coords, 0.5 * (lo + hi));
    ChartPoint out{r.point, p.chart_id};
    out.coords[k] = level;
    return out;
  };

  std::vector<std::vector<double>> frame(dim, std::vector<double>(dim, 0.0));
  for (int i = 0; i < dim; ++i) frame[i][i] = 1.0;

  auto full = parallel_transport(patch, probe.loop, frame).frame;
  PathSpec projected{[&project](double t) { return project(t); }, true, std::nullopt};
  auto proj = parallel_transport(patch, projected, frame).frame;

  std::vector<double> residuals;
  for (int a = 0; a < dim; ++a)
    for (int i = 0; i < dim; ++i)
      residuals.push_back(std::abs(full[a][i] - proj[a][i]));
  return CheckReport::from_residuals("transverse-holonomy", residuals, tol);
}

CheckReport check_loop_identity(const MetricPatch& patch, const PathSpec& loop,
                                double tol, const std::string& name) {
  const int dim = patch.dim();
  std::vector<std::vector<double>> frame(dim, std::vector<double>(dim, 0.0));
  for (int i = 0; i < dim; ++i) frame[i][i] = 1.0;
  auto res = parallel_transport(patch, loop, frame).frame;
  std::vector<double> residuals;
  for (int a = 0; a < dim; ++a)
    for (int i = 0; i < dim; ++i)
      residuals.push_back(std::abs(res[a][i] - frame[a][i]));
  return CheckReport::from_residuals(name, residuals, tol);
}

int holonomy_algebra_estimate(const MetricPatch& patch, const ChartPoint& base,
                              const SamplePlan& plan) {
  const int dim = patch.dim();
  auto pts = sample_coords(patch.domain(), plan);
  std::vector<std::vector<double>> rows;

  for (const auto& coords : pts) {
    const ChartPoint p{coords, base.chart_id};
    auto curv = curvature(patch, p);
    auto m = metric_eval(patch, p);
    // transport matrix columns: coordinate basis carried from p to base
    std::vector<std::vector<double>> frame(dim, std::vector<double>(dim, 0.0));
    for (int i = 0; i < dim; ++i) frame[i][i] = 1.0;
    PathSpec seg{[&](double t) {
                   std::vector<double> c(dim);
                   for (int i = 0; i < dim; ++i)
                     c[i] = (1.0 - t) * coords[i] + t * base.coords[i];
                   return ChartPoint{c, base.chart_id};
                 },
                 false, std::nullopt};
    auto moved = parallel_transport(patch, seg, frame).frame;
    Mat<double> P(dim, 0.0), Pinv(dim, 0.0);
    for (int i = 0; i < dim; ++i)
      for (int a = 0; a < dim; ++a) P(i, a) = moved[a][i];
    Pinv = matrix_inverse(P, 0.0, 1.0);

    for (int i = 0; i < dim; ++i) {
      for (int j = i + 1; j < dim; ++j) {
        // endomorphism M^a_b = R^a_{b i j} = g^{ak} R_{k b i j}
        Mat<double> M(dim, 0.0);
        for (int a = 0; a < dim; ++a)
          for (int b = 0; b < dim; ++b) {
            double s = 0.0;
            for (int kk = 0; kk < dim; ++kk)
              s += m.g_inv(a, kk) * curv.riemann_lowered(kk, b, i, j);
            M(a, b) = s;
          }
        // conjugate to the base point: P M P^{-1}
        std::vector<double> row;
        row.reserve(static_cast<std::size_t>(dim) * dim);
        for (int a = 0; a < dim; ++a)
          for (int b = 0; b < dim; ++b) {
            double s = 0.0;
            for (int u = 0; u < dim; ++u)
              for (int w = 0; w < dim; ++w) s += P(a, u) * M(u, w) * Pinv(w, b);
            row.push_back(s);
          }
        rows.push_back(std::move(row));
      }
    }
  }
  return numeric_rank(rows, 1e-6);
}

CheckReport check_normal_form_agreement(const RhoFamily& fam, const SamplePlan& plan,
                                        double tol, const std::string& name) {
  MetricPatch h = ambient_form_patch(fam, "normal-form");
  const int n = fam.n;
  const int tc = n, rc = n + 1;
  auto pts = sample_coords(h.domain(), plan);
  std::vector<double> nf_scale(pts.size(), 0.0);

  auto residuals = parallel_map(static_cast<int>(pts.size()), [&](int i) {
    const ChartPoint x = make_point(pts[i], h);
    std::vector<double> xs(pts[i].begin(), pts[i].begin() + n);
    const double rho = pts[i][rc];
    auto nf = ricci_normal_form(fam, xs, rho);
    auto curv = curvature(h, x);
    double worst = 0.0;
    double scale = 0.0;
    for (int a = 0; a < n; ++a) {
      for (int b = 0; b < n; ++b) {
        worst = std::max(worst, std::abs(curv.ricci(a, b) - nf.ric_ij(a, b)));
        scale = std::max(scale, std::abs(nf.ric_ij(a, b)));
      }
      worst = std::max(worst, std::abs(curv.ricci(rc, a) - nf.ric_rhoj[a]));
      worst = std::max(worst, std::abs(curv.ricci(tc, a)));
      scale = std::max(scale, std::abs(nf.ric_rhoj[a]));
    }
    worst = std::max(worst, std::abs(curv.ricci(rc, rc) - nf.ric_rhorho));
    worst = std::max(worst, std::abs(curv.ricci(tc, tc)));
    worst = std::max(worst, std::abs(curv.ricci(tc, rc)));
    scale = std::max(scale, std::abs(nf.ric_rhorho));
    nf_scale[i] = scale;
    return worst;
  });

  double biggest = 0.0;
  for (double s : nf_scale) biggest = std::max(biggest, s);
  return CheckReport::from_residuals(name, residuals, tol,
                                     "normal_form_scale=" + format_double(biggest));
}

}  // namespace pem
