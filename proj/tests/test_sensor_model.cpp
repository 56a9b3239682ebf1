#include <doctest.h>

#include <cmath>
#include <stdexcept>
#include <numbers>

#include "ascent/rng.hpp"
#include "ascent/sensor_model.hpp"

using namespace ascent;

namespace {
const SensorModelParams kDefaults;  // c0 = 0.5, c1 = 10, rho = 30

SymMat rotate(const SymMat& q, double theta) {
  const double c = std::cos(theta), s = std::sin(theta);
  // R Q R^T for the 2x2 rotation R(theta)
  const double a = q(0, 0), b = q(0, 1), d = q(1, 1);
  SymMat out(2);
  out.set(0, 0, c * c * a - 2 * c * s * b + s * s * d);
  out.set(0, 1, c * s * (a - d) + (c * c - s * s) * b);
  out.set(1, 1, s * s * a + 2 * c * s * b + c * c * d);
  return out;
}
}  // namespace

TEST_CASE("bearing angle examples") {
  CHECK(*bearing_angle({{0, 0}}, {1, 1}, 1e-3) == doctest::Approx(std::numbers::pi / 4));
  CHECK(*bearing_angle({{0, 0}}, {2, 0}, 1e-3) == doctest::Approx(0.0));
  CHECK(*bearing_angle({{0, 0}}, {0, 3}, 1e-3) == doctest::Approx(std::numbers::pi / 2));
  CHECK_FALSE(bearing_angle({{0, 0}}, {1e-4, 0}, 1e-3).has_value());
}

TEST_CASE("info matrix closed form at cardinal viewing directions") {
  const SymMat q_x = info_matrix({{0, 0}}, {2, 0}, kDefaults);
  CHECK(q_x(0, 0) == doctest::Approx(0.5 / 21.0));   // radial axis, weak
  CHECK(q_x(1, 1) == doctest::Approx(15.0 / 21.0));  // bearing axis, 30x
  CHECK(q_x(0, 1) == doctest::Approx(0.0));

  const SymMat q_y = info_matrix({{0, 0}}, {0, 2}, kDefaults);
  CHECK(q_y(0, 0) == doctest::Approx(15.0 / 21.0));
  CHECK(q_y(1, 1) == doctest::Approx(0.5 / 21.0));

  SensorModelParams capped = kDefaults;
  capped.range_max = 1.0;
  CHECK(info_matrix({{0, 0}}, {5, 0}, capped).frob_norm() == doctest::Approx(0.0));
}

TEST_CASE("info matrix eigenstructure") {
  RngStream rng(3, 1);
  for (int it = 0; it < 200; ++it) {
    const SensorPose pose{{4 * rng.uniform01() - 2, 4 * rng.uniform01() - 2}};
    const double ang = 6.2831853 * rng.uniform01();
    const double d = 0.1 + 4 * rng.uniform01();
    const Vec2 xhat{pose.r[0] + d * std::cos(ang), pose.r[1] + d * std::sin(ang)};

    const SymMat q = info_matrix(pose, xhat, kDefaults);
    const EigDecomp eig = sym_eig(q);
    const double lambda1 = kDefaults.c0 / (1.0 + kDefaults.c1 * d);
    CHECK(eig.values[1] == doctest::Approx(lambda1).epsilon(1e-10));
    CHECK(eig.values[0] == doctest::Approx(kDefaults.rho * lambda1).epsilon(1e-10));

    // The weak eigenvector is the viewing direction.
    const Vec2 view{(xhat[0] - pose.r[0]) / d, (xhat[1] - pose.r[1]) / d};
    const double align = std::abs(eig.vector_entry(0, 1) * view[0] +
                                  eig.vector_entry(1, 1) * view[1]);
    CHECK(align == doctest::Approx(1.0).epsilon(1e-9));
  }
}

TEST_CASE("information decreases with distance") {
  double prev = 1e9;
  for (double d = 0.5; d < 8.0; d += 0.25) {
    const double lambda1 = min_eigenvalue(info_matrix({{0, 0}}, {d, 0}, kDefaults));
    CHECK(lambda1 < prev);
    prev = lambda1;
  }
}

TEST_CASE("rotational equivariance") {
  RngStream rng(5, 2);
  for (int it = 0; it < 200; ++it) {
    const double theta = 6.2831853 * rng.uniform01();
    const Vec2 r{2 * rng.uniform01() - 1, 2 * rng.uniform01() - 1};
    const Vec2 x{r[0] + 0.3 + 3 * rng.uniform01(), r[1] + 2 * rng.uniform01() - 1};
    const double c = std::cos(theta), s = std::sin(theta);
    const SensorPose pose_rot{{c * r[0] - s * r[1], s * r[0] + c * r[1]}};
    const Vec2 x_rot{c * x[0] - s * x[1], s * x[0] + c * x[1]};

    const SymMat q = info_matrix({r}, x, kDefaults);
    const SymMat q_rot = info_matrix(pose_rot, x_rot, kDefaults);
    CHECK((q_rot - rotate(q, theta)).frob_norm() <= 1e-10);
  }
}

TEST_CASE("analytic gradient matches finite differences") {
  RngStream rng(7, 3);
  const double step = 1e-6;
  for (int it = 0; it < 200; ++it) {
    const SensorPose pose{{6 * rng.uniform01() - 3, 6 * rng.uniform01() - 3}};
    const double ang = 6.2831853 * rng.uniform01();
    const double d = 0.2 + 4.8 * rng.uniform01();
    const Vec2 xhat{pose.r[0] + d * std::cos(ang), pose.r[1] + d * std::sin(ang)};
    for (int j = 0; j < 2; ++j) {
      SensorPose hi = pose, lo = pose;
      hi.r[j] += step;
      lo.r[j] -= step;
      SymMat numeric = info_matrix(hi, xhat, kDefaults);
      numeric -= info_matrix(lo, xhat, kDefaults);
      numeric *= 1.0 / (2.0 * step);
      const SymMat analytic = info_gradient(pose, xhat, kDefaults, j);
      CHECK((numeric - analytic).frob_norm() / std::max(analytic.frob_norm(), 1e-12) <= 1e-5);
    }
  }
}

TEST_CASE("gradient along the axis and mirrored antisymmetry") {
  const double d = 2.0;
  const SymMat g = info_gradient({{0, 0}}, {d, 0}, kDefaults, 0);
  const double denom = 1.0 + kDefaults.c1 * d;
  // moving toward the target raises the radial information
  CHECK(g(0, 0) == doctest::Approx(kDefaults.c0 * kDefaults.c1 / (denom * denom)));
  CHECK(g(0, 0) > 0.0);

  const SymMat g_mirror = info_gradient({{0, 0}}, {-d, 0}, kDefaults, 0);
  CHECK((g_mirror + g).frob_norm() <= 1e-12);
}

TEST_CASE("gradient is zero outside range and inside the clamp") {
  SensorModelParams capped = kDefaults;
  capped.range_max = 1.0;
  CHECK(info_gradient({{0, 0}}, {3, 0}, capped, 0).frob_norm() == doctest::Approx(0.0));
  CHECK(info_gradient({{0, 0}}, {1e-5, 0}, kDefaults, 1).frob_norm() == doctest::Approx(0.0));
}

TEST_CASE("observation sampling") {
  RngStream rng(9, 4);
  const TargetTruth truth{{1.0, 2.0}};

  const auto clean = sample_observation(rng, {{0, 0}}, truth, kDefaults, true);
  CHECK((*clean)[0] == truth.x[0]);
  CHECK((*clean)[1] == truth.x[1]);

  SensorModelParams capped = kDefaults;
  capped.range_max = 1.0;
  CHECK_FALSE(sample_observation(rng, {{0, 0}}, truth, capped).has_value());
}

TEST_CASE("observation noise matches the inverse information matrix") {
  RngStream rng(11, 5);
  const SensorPose pose{{0, 0}};
  const TargetTruth truth{{1.2, 0.9}};
  const SymMat cov = inverse_spd(info_matrix(pose, truth.x, kDefaults));

  const int count = 50000;
  double c00 = 0, c01 = 0, c11 = 0;
  for (int it = 0; it < count; ++it) {
    const Vec2 y = *sample_observation(rng, pose, truth, kDefaults);
    const Vec2 z = y - truth.x;
    c00 += z[0] * z[0];
    c01 += z[0] * z[1];
    c11 += z[1] * z[1];
  }
  CHECK(c00 / count == doctest::Approx(cov(0, 0)).epsilon(0.05));
  CHECK(c01 / count == doctest::Approx(cov(0, 1)).epsilon(0.05));
  CHECK(c11 / count == doctest::Approx(cov(1, 1)).epsilon(0.05));
}

TEST_CASE("parameter validation names the offending field") {
  SensorModelParams bad = kDefaults;
  bad.rho = 0.5;
  CHECK_THROWS_WITH_AS(bad.validate(), "rho: must be > 1", std::invalid_argument);
  bad = kDefaults;
  bad.c0 = -1.0;
  CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
}
