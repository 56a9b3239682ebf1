#pragma once

#include <cstddef>
#include <vector>

#include "ascent/symmat.hpp"
#include "ascent/vec.hpp"

namespace ascent {

// Gaussian belief over one landmark: mean [m] and information matrix [1/m^2].
struct TargetEstimate {
  Vec2 xhat{0.0, 0.0};
  SymMat info{2};
};

// The shared data set: one belief per landmark.
struct EstimateSet {
  std::vector<TargetEstimate> targets;

  std::size_t size() const { return targets.size(); }
  TargetEstimate& operator[](std::size_t i) { return targets[i]; }
  const TargetEstimate& operator[](std::size_t i) const { return targets[i]; }
};

// Euclidean norm over all means and information entries; drives the
// relative-change early-stop test.
double data_norm(const EstimateSet& d);
double data_distance(const EstimateSet& a, const EstimateSet& b);

}  // namespace ascent
