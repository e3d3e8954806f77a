#pragma once

#include <functional>
#include <memory>
#include <span>
#include <string>

#include "pem/chart.hpp"
#include "pem/jet.hpp"
#include "pem/linalg.hpp"

namespace pem {

using JetVars = std::span<const Jet>;

// Evaluates the metric components g_ij as jets of the chart coordinates.
// `vars` holds one jet per coordinate, all living in a common JetSpace whose
// order decides how many derivatives come out. Writing the components in
// terms of the vars is what propagates exact derivatives through warped
// products, cones and coordinate changes.
using MetricFn = std::function<void(JetVars vars, Mat<Jet>& out)>;

enum class JetMode { analytic, finite_difference };

// A chart-local pseudo-Riemannian metric with an exact jet provider.
class MetricPatch {
public:
  MetricPatch() = default;
  MetricPatch(int dim, Signature sig, std::string chart_id, Domain domain,
              MetricFn fn, int max_jet_order = 4)
      : dim_(dim),
        sig_(sig),
        chart_id_(std::move(chart_id)),
        domain_(std::move(domain)),
        fn_(std::move(fn)),
        max_jet_order_(max_jet_order) {}

  int dim() const { return dim_; }
  Signature signature() const { return sig_; }
  const std::string& chart_id() const { return chart_id_; }
  const Domain& domain() const { return domain_; }
  int max_jet_order() const { return max_jet_order_; }
  bool oriented() const { return oriented_; }
  void set_oriented(bool o) { oriented_ = o; }

  // Component matrix at a point (jet order 0).
  Mat<double> components(const ChartPoint& x) const;

  // Jets of every component to the requested order. In finite-difference
  // mode the derivatives (order <= 2) come from central differences of the
  // component evaluation instead of the analytic provider.
  Mat<Jet> jets(const ChartPoint& x, int order,
                JetMode mode = JetMode::analytic) const;

  // Evaluate the raw component function on caller-provided jet variables.
  void eval(JetVars vars, Mat<Jet>& out) const { fn_(vars, out); }

private:
  int dim_ = 0;
  Signature sig_;
  std::string chart_id_;
  Domain domain_;
  MetricFn fn_;
  int max_jet_order_ = 4;
  bool oriented_ = true;
};

// Components together with the exact inverse at a point.
struct MetricAtPoint {
  Mat<double> g;
  Mat<double> g_inv;
};

// Evaluates g_ij and its matrix inverse; rejects near-singular metrics and
// points outside the declared domain.
MetricAtPoint metric_eval(const MetricPatch& patch, const ChartPoint& x);

// Central finite differences of the metric components, packed as jets.
// Supports order <= 2; step sizes scale with the coordinate magnitude.
Mat<Jet> finite_difference_jets(const MetricPatch& patch, const ChartPoint& x,
                                int order);

// Fresh variables at a different order, at the point encoded in `vars`.
// Valid because evaluators are only ever invoked on seeded chart variables.
std::vector<Jet> reseed_variables(JetVars vars, int order);

// New coordinates -> old coordinates, as jets, for metric pullbacks.
using CoordMapFn = std::function<std::vector<Jet>(JetVars)>;

// The metric `target` expressed in new coordinates:
// g'_AB = (d old^C/d new^A)(d old^D/d new^B) g_CD(old(new)).
// Jets of the pullback are exact (the map is evaluated one order up).
MetricPatch pullback_metric(const MetricPatch& target, CoordMapFn map, int new_dim,
                            Signature sig, Domain domain, std::string chart_id);

}  // namespace pem
