#pragma once

#include <functional>
#include <span>
#include <vector>

#include "pem/metric.hpp"
#include "pem/vector_field.hpp"

namespace pem {

// Basis bookkeeping for antisymmetric tensors: strictly increasing index
// tuples in lexicographic order, plus sign lookups for arbitrary tuples.
class FormBasis {
public:
  static const FormBasis& get(int dim, int degree);

  int dim() const { return dim_; }
  int degree() const { return degree_; }
  int size() const { return static_cast<int>(tuples_.size()); }
  std::span<const int> tuple(int idx) const {
    return {tuples_[idx].data(), tuples_[idx].size()};
  }
  // Index of an increasing tuple.
  int index_of(std::span<const int> tuple) const;
  // For an arbitrary tuple: (index into increasing basis, permutation sign);
  // sign = 0 when an index repeats.
  std::pair<int, int> locate(std::span<const int> tuple) const;

private:
  FormBasis(int dim, int degree);
  int dim_;
  int degree_;
  std::vector<std::vector<int>> tuples_;
};

// Sign of the permutation sorting `tuple`; 0 if it has repeats.
int permutation_sign(std::span<const int> tuple);

// A p-form field with jet-evaluable components on the increasing basis.
struct FormField {
  int dim = 0;
  int degree = 0;
  std::function<void(JetVars vars, std::span<Jet> out)> fn;

  int ncomps() const { return FormBasis::get(dim, degree).size(); }

  std::vector<Jet> eval_jets(const JetSpace& space,
                             std::span<const double> coords) const;
  std::vector<double> eval(std::span<const double> coords) const;
};

// Constant-coefficient p-form dx^{t0} ^ ... ^ dx^{t(p-1)}.
FormField coordinate_form(int dim, std::vector<int> tuple);
FormField zero_form(int dim, int degree);
FormField form_sum(const FormField& a, const FormField& b);
// Multiply by a jet-evaluable scalar function.
FormField scale_form(const FormField& a,
                     std::function<Jet(JetVars)> scalar);

// Exterior derivative as a field (component jets drop one order).
FormField exterior_d(const FormField& a);
FormField wedge(const FormField& a, const FormField& b);
FormField interior_product(const VectorField& X, const FormField& a);
// sqrt(|det g|) dx^1 ^ ... ^ dx^m of an oriented patch.
FormField volume_form(const MetricPatch& patch);

// Pointwise operations that need the metric.
// (grad_Y a)_I with Y given by chart components at x.
std::vector<double> covariant_derivative(const MetricPatch& patch, const FormField& a,
                                         std::span<const double> Y, const ChartPoint& x);
// Hodge star of the value of `a` at x; orientation is the coordinate order.
std::vector<double> hodge_star(const MetricPatch& patch, const FormField& a,
                               const ChartPoint& x);
// |a|^2 at x (indefinite metrics give either sign).
double form_norm2(const MetricPatch& patch, const FormField& a, const ChartPoint& x);
// Metric-dual vector field of a 1-form.
VectorField sharp(const MetricPatch& patch, const FormField& a);

}  // namespace pem
