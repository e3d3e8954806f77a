#pragma once

#include <functional>
#include <span>

#include "pem/metric.hpp"

namespace pem {

// A chart-local vector field with jet-evaluable components.
struct VectorField {
  int dim = 0;
  std::function<void(JetVars vars, std::span<Jet> out)> fn;

  std::vector<Jet> eval_jets(const JetSpace& space,
                             std::span<const double> coords) const {
    auto vars = seed_variables(space, coords);
    std::vector<Jet> out(dim, Jet(space, 0.0));
    fn(vars, out);
    return out;
  }

  std::vector<double> eval(std::span<const double> coords) const {
    const JetSpace& sp = JetSpace::get(dim, 0);
    auto jets = eval_jets(sp, coords);
    std::vector<double> v(dim);
    for (int i = 0; i < dim; ++i) v[i] = jets[i].value();
    return v;
  }
};

// x_k d/dx_k (no sum); the Euler field of a cone factor in these charts.
VectorField coordinate_scaling_field(int dim, int coord);

// Sum of two fields on the same chart.
VectorField field_sum(const VectorField& a, const VectorField& b);

// Zero field.
VectorField zero_field(int dim);

// Christoffel symbols only (order-1 metric jets); Gamma(k,i,j) = Gamma^k_ij.
Tensor3<double> christoffel_at(const MetricPatch& patch, const ChartPoint& x);

// (L_V g)_ij = grad_i V_j + grad_j V_i, indices lowered with g.
Mat<double> lie_derivative_metric(const MetricPatch& patch, const VectorField& V,
                                  const ChartPoint& x);

// The 1-form g(V, .) as a jet-evaluable covector field; used for gradient
// (closedness) checks on homothetic fields.
std::function<void(JetVars, std::span<Jet>)> metric_dual(const MetricPatch& patch,
                                                         const VectorField& V);

}  // namespace pem
