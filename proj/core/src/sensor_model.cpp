#include "ascent/sensor_model.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace ascent {

namespace {
constexpr double kSingularInfo = 1e-12;

struct Geometry {
  Vec2 delta;      // xhat - r, possibly replaced by the clamp direction
  double distance; // evaluation distance (>= pos_epsilon)
  bool clamped;    // separation below pos_epsilon
};

Geometry resolve_geometry(const SensorPose& pose, const Vec2& xhat, double pos_epsilon) {
  Geometry g;
  g.delta = xhat - pose.r;
  g.distance = norm(g.delta);
  g.clamped = g.distance < pos_epsilon;
  if (g.clamped) {
    // Degenerate viewing geometry: hold Q at the value it takes at distance
    // pos_epsilon along the zero-bearing direction.
    g.delta = {pos_epsilon, 0.0};
    g.distance = pos_epsilon;
  }
  return g;
}
}  // namespace

void SensorModelParams::validate() const {
  if (!(c0 > 0.0) || !std::isfinite(c0)) throw std::invalid_argument("c0: must be > 0");
  if (!(c1 > 0.0) || !std::isfinite(c1)) throw std::invalid_argument("c1: must be > 0");
  if (!(rho > 1.0) || !std::isfinite(rho)) throw std::invalid_argument("rho: must be > 1");
  if (range_max && !(*range_max > 0.0)) throw std::invalid_argument("range_max: must be > 0");
  if (!(pos_epsilon > 0.0)) throw std::invalid_argument("pos_epsilon: must be > 0");
}

std::optional<double> bearing_angle(const SensorPose& pose, const Vec2& xhat,
                                    double pos_epsilon) {
  const Vec2 delta = xhat - pose.r;
  if (norm(delta) < pos_epsilon) return std::nullopt;
  if (delta[0] == 0.0) return std::numbers::pi / 2.0;
  return std::atan(delta[1] / delta[0]);
}

SymMat info_matrix(const SensorPose& pose, const Vec2& xhat, const SensorModelParams& params) {
  const double separation = dist(pose.r, xhat);
  if (params.range_max && separation > *params.range_max) return SymMat(2);

  const Geometry g = resolve_geometry(pose, xhat, params.pos_epsilon);
  const double lambda1 = params.c0 / (1.0 + params.c1 * g.distance);
  const Vec2 view = {g.delta[0] / g.distance, g.delta[1] / g.distance};

  // Q = lambda1 * (rho I - (rho - 1) v v^T): eigenvalue lambda1 along the
  // viewing direction v, rho*lambda1 across it. The projector form is smooth
  // in the pose, unlike the bearing angle itself.
  SymMat q = SymMat::identity(2);
  q *= lambda1 * params.rho;
  q -= SymMat::outer2(lambda1 * (params.rho - 1.0), view);
  return q;
}

SymMat info_gradient(const SensorPose& pose, const Vec2& xhat, const SensorModelParams& params,
                     int coord) {
  if (coord < 0 || coord > 1) throw std::invalid_argument("info_gradient: coord must be 0 or 1");
  const double separation = dist(pose.r, xhat);
  if (params.range_max && separation > *params.range_max) return SymMat(2);
  if (separation < params.pos_epsilon) return SymMat(2);  // constant inside the clamp

  const Vec2 delta = xhat - pose.r;
  const double d = separation;
  const double denom = 1.0 + params.c1 * d;
  const double lambda1 = params.c0 / denom;
  // d(lambda1)/d(r_j): moving toward the target increases information.
  const double dlambda = params.c0 * params.c1 * delta[coord] / (denom * denom * d);

  const Vec2 view = {delta[0] / d, delta[1] / d};

  // d(v v^T)/d(r_j) = (-e_j delta^T - delta e_j^T)/d^2 + 2 delta_j delta delta^T / d^4
  SymMat dprojector(2);
  const double inv_d2 = 1.0 / (d * d);
  if (coord == 0) {
    dprojector.set(0, 0, -2.0 * delta[0] * inv_d2);
    dprojector.set(0, 1, -delta[1] * inv_d2);
  } else {
    dprojector.set(0, 1, -delta[0] * inv_d2);
    dprojector.set(1, 1, -2.0 * delta[1] * inv_d2);
  }
  dprojector += SymMat::outer2(2.0 * delta[coord] * inv_d2 * inv_d2, delta);

  SymMat grad = SymMat::identity(2);
  grad *= dlambda * params.rho;
  grad -= SymMat::outer2(dlambda * (params.rho - 1.0), view);
  SymMat second = dprojector;
  second *= lambda1 * (params.rho - 1.0);
  grad -= second;
  return grad;
}

std::optional<Vec2> sample_observation(RngStream& rng, const SensorPose& pose,
                                       const TargetTruth& truth, const SensorModelParams& params,
                                       bool zero_noise) {
  const SymMat q = info_matrix(pose, truth.x, params);
  if (min_eigenvalue(q) < kSingularInfo) return std::nullopt;
  if (zero_noise) return truth.x;

  const SymMat cov = inverse_spd(q, kSingularInfo);
  // Lower Cholesky factor of the 2x2 covariance.
  const double l00 = std::sqrt(cov(0, 0));
  const double l10 = cov(1, 0) / l00;
  const double l11 = std::sqrt(std::max(0.0, cov(1, 1) - l10 * l10));
  const double z0 = rng.normal();
  const double z1 = rng.normal();
  return Vec2{truth.x[0] + l00 * z0, truth.x[1] + l10 * z0 + l11 * z1};
}

}  // namespace ascent
