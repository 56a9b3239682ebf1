#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "ascent/estimate.hpp"
#include "ascent/sensor_model.hpp"

namespace ascent {

enum class VerifyLevel { fast, full };

struct CheckResult {
  std::string name;
  bool passed = false;
  std::string detail;
  double seconds = 0.0;
};

struct VerifyReport {
  std::vector<CheckResult> checks;
  bool all_passed() const;
};

// Runs the oracle suite: symmetric-matrix properties, sensor-model finite
// differences and Monte-Carlo covariance, consensus-vs-centralized fusion,
// violation-gradient finite differences, solver-vs-grid-oracle instances and
// the error-sequence summability diagnostics. fast trims sample counts to a
// sub-30-second budget; full runs the acceptance-scale counts.
VerifyReport run_verify(VerifyLevel level);

std::string report_json(const VerifyReport& report);

// Finite-difference comparator for a sensor-information gradient, exposed so
// a deliberately corrupted gradient can be shown to fail it. Returns the
// worst relative Frobenius error over random in-range configurations.
using InfoGradientFn =
    std::function<SymMat(const SensorPose&, const Vec2&, const SensorModelParams&, int)>;
double sensor_gradient_fd_error(const InfoGradientFn& gradient, std::size_t samples,
                                std::uint64_t seed);

// A fixed-data planning instance for oracle comparisons.
struct PlanningInstance {
  EstimateSet data;
  std::vector<SensorPose> poses;
  SensorModelParams params;
  std::vector<double> tau;
  std::vector<double> delta;
};

// Best achievable sum of eigenvalue floors on the linearized problem, by
// grid search over the control ball at resolution u_step with the per-control
// optimal floors rounded down to gamma_step. Controls of one sensor are
// scanned exhaustively; multi-sensor instances refine a coarse scan down to
// u_step, which reaches the grid optimum because the objective is concave.
double grid_plan_oracle(const PlanningInstance& instance, double u_step, double gamma_step);

}  // namespace ascent
