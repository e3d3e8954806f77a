#include "pem/sample.hpp"

#include <cmath>

namespace pem {

std::uint64_t splitmix64(std::uint64_t& state) {
  state += 0x9E3779B97F4A7C15ull;
  std::uint64_t z = state;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
  return z ^ (z >> 31);
}

double uniform01(std::uint64_t seed, std::uint64_t index, std::uint64_t draw) {
  std::uint64_t state = seed ^ (0xD1B54A32D192ED03ull * (index + 1)) ^
                        (0x8CB92BA72F3D8DD7ull * (draw + 1));
  const std::uint64_t z = splitmix64(state);
  return static_cast<double>(z >> 11) * 0x1.0p-53;
}

std::vector<std::vector<double>> sample_coords(const Domain& dom,
                                               const SamplePlan& plan,
                                               double exclusion_band) {
  const int dim = dom.dim();
  std::vector<std::pair<double, double>> box;
  if (plan.box) {
    box = *plan.box;
  } else {
    box.reserve(dim);
    for (const auto& [lo, hi] : dom.box) {
      const double w = hi - lo;
      double lo_eff = lo + 0.02 * w;
      const double hi_eff = hi - 0.02 * w;
      if (lo == 0.0) lo_eff = std::max(lo_eff, 0.05);  // radial coordinates
      box.push_back({lo_eff, hi_eff});
    }
  }

  std::vector<std::vector<double>> pts;
  pts.reserve(plan.count);
  for (int i = 0; i < plan.count; ++i) {
    std::vector<double> x(dim);
    std::uint64_t draw = 0;
    for (int c = 0; c < dim; ++c) {
      for (;;) {
        const double u = uniform01(plan.seed, static_cast<std::uint64_t>(i), draw++);
        x[c] = box[c].first + u * (box[c].second - box[c].first);
        bool ok = true;
        for (const auto& e : dom.excluded) {
          if (e.coord == c && std::abs(x[c] - e.value) <= exclusion_band) {
            ok = false;
            break;
          }
        }
        if (ok) break;
      }
    }
    pts.push_back(std::move(x));
  }
  return pts;
}

}  // namespace pem
