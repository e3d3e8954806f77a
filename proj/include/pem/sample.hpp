#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "pem/chart.hpp"

namespace pem {

// Deterministic seeded sampling: identical (seed, count, box) produce
// bit-identical sequences regardless of thread count, because every sample
// index owns its own generator state.
struct SamplePlan {
  std::uint64_t seed = 0;
  int count = 20;
  // Optional per-coordinate override of the sampling box.
  std::optional<std::vector<std::pair<double, double>>> box;
};

std::uint64_t splitmix64(std::uint64_t& state);

// Uniform draw in [0,1) from a per-(seed,index,draw) stream.
double uniform01(std::uint64_t seed, std::uint64_t index, std::uint64_t draw);

// Samples points in the domain box (shrunk away from the boundary, and away
// from zero-lower-bound coordinates such as cone radii), rejecting points
// within `exclusion_band` of an excluded locus.
std::vector<std::vector<double>> sample_coords(const Domain& dom,
                                               const SamplePlan& plan,
                                               double exclusion_band = 1e-3);

}  // namespace pem
