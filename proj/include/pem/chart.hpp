#pragma once

#include <cmath>
#include <optional>
#include <string>
#include <vector>

#include "pem/errors.hpp"

namespace pem {

// A point in a named coordinate chart.
struct ChartPoint {
  std::vector<double> coords;
  std::string chart_id;

  int dim() const { return static_cast<int>(coords.size()); }
  double operator[](int i) const { return coords[i]; }
};

// Metric signature (p, q): p positive and q negative eigenvalues.
struct Signature {
  int p = 0;
  int q = 0;

  int dim() const { return p + q; }
  Signature flipped() const { return {q, p}; }
  // Sign of the metric determinant: (-1)^q.
  int det_sign() const { return (q % 2 == 0) ? 1 : -1; }
  bool operator==(const Signature&) const = default;
};

// An open coordinate box together with excluded hypersurface loci
// {coord = value}. Excluded values are kept in closed form where they arise
// from construction formulas (e.g. sqrt(2/|mu|)) and realized lazily.
struct Domain {
  struct Exclusion {
    int coord = 0;
    double value = 0.0;
    std::string label;  // closed form, for reporting
  };

  std::vector<std::pair<double, double>> box;
  std::vector<Exclusion> excluded;

  int dim() const { return static_cast<int>(box.size()); }

  bool contains(const std::vector<double>& x, double exclusion_band = 1e-9) const {
    if (static_cast<int>(x.size()) != dim()) return false;
    for (int i = 0; i < dim(); ++i) {
      if (!(x[i] > box[i].first && x[i] < box[i].second)) return false;
    }
    for (const auto& e : excluded) {
      if (std::abs(x[e.coord] - e.value) <= exclusion_band) return false;
    }
    return true;
  }

  void require(const ChartPoint& x) const {
    if (!contains(x.coords)) {
      throw OutOfDomain("point outside chart domain" +
                        (x.chart_id.empty() ? "" : " of " + x.chart_id));
    }
  }

  // Cartesian product of two domains (coordinates concatenated).
  static Domain product(const Domain& a, const Domain& b) {
    Domain d;
    d.box = a.box;
    d.box.insert(d.box.end(), b.box.begin(), b.box.end());
    d.excluded = a.excluded;
    for (auto e : b.excluded) {
      e.coord += a.dim();
      d.excluded.push_back(e);
    }
    return d;
  }

  static Domain cube(int dim, double half_width) {
    Domain d;
    d.box.assign(dim, {-half_width, half_width});
    return d;
  }
};

}  // namespace pem
