#pragma once

#include <optional>

#include "ascent/rng.hpp"
#include "ascent/symmat.hpp"
#include "ascent/vec.hpp"

namespace ascent {

// Parameters of the measurement information function Q(r, x).
struct SensorModelParams {
  double c0 = 0.5;    // overall sensor quality [1/m^2]
  double c1 = 10.0;   // depth sensitivity [1/m]
  double rho = 30.0;  // confidence-ellipse eccentricity, > 1
  std::optional<double> range_max;  // sensing range [m]; unset = unbounded
  double pos_epsilon = 1e-3;        // minimum evaluation distance [m]

  // Throws std::invalid_argument naming the offending field.
  void validate() const;
};

struct SensorPose {
  Vec2 r{0.0, 0.0};  // position [m]
};

// Ground-truth landmark position; hidden from the planner.
struct TargetTruth {
  Vec2 x{0.0, 0.0};
};

// Viewing angle in (-pi/2, pi/2] of the line from r to xhat; pi/2 for a
// vertical line. Empty when the separation is below pos_epsilon.
std::optional<double> bearing_angle(const SensorPose& pose, const Vec2& xhat,
                                    double pos_epsilon);

// Information matrix of one observation: eigenvalue c0/(1 + c1*dist) along
// the viewing direction, rho times that across it. Out-of-range targets get
// the zero matrix (infinite variance). Separations below pos_epsilon are
// clamped to pos_epsilon so the value is total.
SymMat info_matrix(const SensorPose& pose, const Vec2& xhat, const SensorModelParams& params);

// Analytic partial derivative of info_matrix with respect to sensor
// coordinate coord (0 or 1). Zero outside range_max and inside the
// pos_epsilon clamp region, where Q is held constant.
SymMat info_gradient(const SensorPose& pose, const Vec2& xhat, const SensorModelParams& params,
                     int coord);

// Derivative with respect to the target coordinate instead; Q depends on the
// pair only through xhat - r, so this is the negated sensor gradient. Not
// used by the planner, but kept under the same finite-difference harness.
inline SymMat info_gradient_target(const SensorPose& pose, const Vec2& xhat,
                                   const SensorModelParams& params, int coord) {
  SymMat g = info_gradient(pose, xhat, params, coord);
  g *= -1.0;
  return g;
}

// Draw y = x + zeta with zeta ~ N(0, Q(r, x)^-1), consuming two normals from
// the caller's stream. Empty when Q is singular (out of range): no
// observation is produced. zero_noise is a test hook forcing zeta = 0.
std::optional<Vec2> sample_observation(RngStream& rng, const SensorPose& pose,
                                       const TargetTruth& truth, const SensorModelParams& params,
                                       bool zero_noise = false);

}  // namespace ascent
