#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "ascent/estimate.hpp"
#include "ascent/sensor_model.hpp"
#include "ascent/symmat.hpp"

namespace ascent {

// Branch threshold below which the violation gradient takes the constant
// d-branch, and the constant itself.
inline constexpr double kZeroViolation = 1e-12;
inline constexpr double kPsiConstant = 1.0;

// Joint planning variable z = (gamma, u): per-landmark eigenvalue floors
// gamma_i [1/m^2] followed by per-sensor displacement blocks u_s [m].
class DecisionVector {
 public:
  DecisionVector() = default;
  DecisionVector(std::size_t num_targets, std::size_t num_sensors);

  std::size_t num_targets() const { return num_targets_; }
  std::size_t num_sensors() const { return num_sensors_; }
  std::size_t size() const { return entries_.size(); }

  double gamma(std::size_t i) const { return entries_[i]; }
  void set_gamma(std::size_t i, double v) { entries_[i] = v; }
  Vec2 u(std::size_t s) const;
  void set_u(std::size_t s, const Vec2& v);

  double operator[](std::size_t k) const { return entries_[k]; }
  double& operator[](std::size_t k) { return entries_[k]; }

  bool finite() const;

  friend double distance(const DecisionVector& a, const DecisionVector& b);
  friend double vec_norm(const DecisionVector& a);

 private:
  std::size_t num_targets_ = 0;
  std::size_t num_sensors_ = 0;
  std::vector<double> entries_;
};

double distance(const DecisionVector& a, const DecisionVector& b);
double vec_norm(const DecisionVector& a);

// Linearized per-landmark constraint matrix
//   h(z) = gamma_i I - S_i - sum_s [ Q(r_s, xhat_i) + sum_j dQ/dr_j(r_s, xhat_i) u_sj ],
// negative semidefinite exactly when the linearized floor constraint holds.
SymMat assemble_h(const DecisionVector& z, const EstimateSet& data, std::size_t target,
                  std::span<const SensorPose> poses, const SensorModelParams& params);

// Scalar violation ||PSD-part of h||_F; zero iff the constraint is satisfied.
double h_plus(const DecisionVector& z, const EstimateSet& data, std::size_t target,
              std::span<const SensorPose> poses, const SensorModelParams& params);

// Gradient of h_plus in z. On the zero-violation branch every entry is the
// constant kPsiConstant; otherwise entry j is Tr(d_j h * X)/||X||_F with
// X the PSD part of h. The gamma block is exactly sparse: only entry
// `target` is nonzero.
std::vector<double> h_plus_grad(const DecisionVector& z, const EstimateSet& data,
                                std::size_t target, std::span<const SensorPose> poses,
                                const SensorModelParams& params);

// Same gradient from a precomputed constraint matrix, avoiding re-assembly.
std::vector<double> h_plus_grad_at(const SymMat& h, std::size_t num_targets,
                                   const EstimateSet& data, std::size_t target,
                                   std::span<const SensorPose> poses,
                                   const SensorModelParams& params);

// Violation of the original (unlinearized) constraint with the sensors moved
// by the given controls: the diagnostic that measures linearization error.
double nonlinear_violation(std::span<const Vec2> controls, const EstimateSet& data,
                           std::size_t target, std::span<const SensorPose> poses,
                           const SensorModelParams& params, double gamma_i);

// Upper bound on ||h_plus_grad|| over all z for the given data: 2-norm of the
// per-entry eigenvalue bounds of the constant matrices d_j h. Checked against
// every gradient evaluation when diagnostics are on.
double grad_norm_bound(const EstimateSet& data, std::span<const SensorPose> poses,
                       const SensorModelParams& params);

// Upper bound on h_plus over the whole feasible box for one constraint:
// Frobenius norms of every term of h at the extreme gamma and controls.
double violation_bound(const EstimateSet& data, std::size_t target,
                       std::span<const SensorPose> poses, const SensorModelParams& params,
                       double tau_i, std::span<const double> delta);

}  // namespace ascent
