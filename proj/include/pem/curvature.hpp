#pragma once

#include <optional>
#include <vector>

#include "pem/metric.hpp"

namespace pem {

// Pointwise curvature data, all indices lowered unless marked otherwise.
// riemann(i,j,k,l) = R_ijkl with R(X,Y)Z conventions chosen so that the round
// sphere of curvature K has Ric = (m-1)K g.
struct CurvatureAtPoint {
  Tensor3<double> christoffel;  // christoffel(k,i,j) = Gamma^k_ij
  Tensor4<double> riemann_lowered;
  Mat<double> ricci;
  double scalar = 0.0;
};

struct ConformalCurvatureAtPoint {
  Mat<double> schouten;        // P_ij
  Tensor3<double> cotton;      // C_kij = grad_k P_ij - grad_i P_kj
  Tensor4<double> weyl_lowered;
  std::optional<Mat<double>> bach;  // dimension 4 only
};

// Jet-valued curvature pieces; orders drop by one per derivative taken.
struct JetCurvature {
  Mat<Jet> g;        // order k
  Mat<Jet> g_inv;    // order k
  Tensor3<Jet> christoffel;  // order k-1
  Tensor4<Jet> riemann;      // order k-2, lowered
  Mat<Jet> ricci;            // order k-2
  Jet scalar;                // order k-2
};

// Assembles curvature from metric jets, differentiating only along the
// variables listed in `dirs` (defaults to all of them). The metric matrix
// indices run over dirs as well, so a family of n-metrics embedded in an
// (n+1)-variable jet space works the same way as a plain patch.
JetCurvature curvature_from_jets(const Mat<Jet>& g, const std::vector<int>& dirs);

CurvatureAtPoint curvature(const MetricPatch& patch, const ChartPoint& x,
                           JetMode mode = JetMode::analytic);

// Weyl for dim >= 3; Cotton always filled; Bach for dim == 4 (needs order-4
// jets of the metric).
ConformalCurvatureAtPoint conformal_curvature(const MetricPatch& patch,
                                              const ChartPoint& x);

// Einstein tensor divergence (contracted second Bianchi residual):
// max_j |grad^i (Ric_ij - 1/2 Sc g_ij)|.
double einstein_divergence_residual(const MetricPatch& patch, const ChartPoint& x);

}  // namespace pem
