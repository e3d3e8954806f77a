#pragma once

#include <functional>
#include <optional>
#include <vector>

#include "pem/metric.hpp"
#include "pem/vector_field.hpp"

namespace pem {

// A piecewise-smooth parametrized curve t in [0,1] -> chart point. The curve
// function must be evaluable slightly outside [0,1] (or be closed), since the
// default velocity comes from a centered stencil in t.
struct PathSpec {
  std::function<ChartPoint(double)> curve;
  bool closed = false;
  std::optional<std::function<std::vector<double>(double)>> velocity;

  std::vector<double> velocity_at(double t) const;
};

struct IntegrationOptions {
  double abs_tol = 1e-9;
  double rel_tol = 1e-9;
  int max_steps = 2000000;
};

struct TransportResult {
  std::vector<std::vector<double>> frame;
  int steps = 0;
};

// Solves grad_{dcurve/dt} F = 0 for every frame vector with an adaptive
// embedded 4(5) Runge-Kutta integrator.
TransportResult parallel_transport(const MetricPatch& patch, const PathSpec& path,
                                   const std::vector<std::vector<double>>& frame,
                                   const IntegrationOptions& opts = {});

// Integral flow of a vector field, with the derivative of the flow map.
struct FlowResult {
  std::vector<double> point;
  Mat<double> jacobian;
  int steps = 0;
};

FlowResult flow_with_jacobian(const VectorField& v, const std::vector<double>& start,
                              double tau, const IntegrationOptions& opts = {});

}  // namespace pem
