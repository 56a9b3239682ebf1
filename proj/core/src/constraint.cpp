#include "ascent/constraint.hpp"

#include <cmath>
#include <stdexcept>

namespace ascent {

DecisionVector::DecisionVector(std::size_t num_targets, std::size_t num_sensors)
    : num_targets_(num_targets),
      num_sensors_(num_sensors),
      entries_(num_targets + 2 * num_sensors, 0.0) {}

Vec2 DecisionVector::u(std::size_t s) const {
  const std::size_t base = num_targets_ + 2 * s;
  return {entries_[base], entries_[base + 1]};
}

void DecisionVector::set_u(std::size_t s, const Vec2& v) {
  const std::size_t base = num_targets_ + 2 * s;
  entries_[base] = v[0];
  entries_[base + 1] = v[1];
}

bool DecisionVector::finite() const {
  for (double x : entries_)
    if (!std::isfinite(x)) return false;
  return true;
}

double distance(const DecisionVector& a, const DecisionVector& b) {
  if (a.size() != b.size()) throw std::invalid_argument("DecisionVector distance: size mismatch");
  double s = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) {
    const double d = a.entries_[k] - b.entries_[k];
    s += d * d;
  }
  return std::sqrt(s);
}

double vec_norm(const DecisionVector& a) {
  double s = 0.0;
  for (double x : a.entries_) s += x * x;
  return std::sqrt(s);
}

SymMat assemble_h(const DecisionVector& z, const EstimateSet& data, std::size_t target,
                  std::span<const SensorPose> poses, const SensorModelParams& params) {
  if (target >= data.size()) throw std::out_of_range("assemble_h: target index out of range");
  if (z.num_sensors() != poses.size() || z.num_targets() != data.size())
    throw std::invalid_argument("assemble_h: inconsistent dimensions");

  const Vec2 xhat = data[target].xhat;
  SymMat h = SymMat::identity(2);
  h *= z.gamma(target);
  h -= data[target].info;
  for (std::size_t s = 0; s < poses.size(); ++s) {
    h -= info_matrix(poses[s], xhat, params);
    const Vec2 u = z.u(s);
    for (int j = 0; j < 2; ++j) {
      SymMat g = info_gradient(poses[s], xhat, params, j);
      g *= u[j];
      h -= g;
    }
  }
  return h;
}

double h_plus(const DecisionVector& z, const EstimateSet& data, std::size_t target,
              std::span<const SensorPose> poses, const SensorModelParams& params) {
  return violation_norm(assemble_h(z, data, target, poses, params));
}

std::vector<double> h_plus_grad(const DecisionVector& z, const EstimateSet& data,
                                std::size_t target, std::span<const SensorPose> poses,
                                const SensorModelParams& params) {
  return h_plus_grad_at(assemble_h(z, data, target, poses, params), z.num_targets(), data,
                        target, poses, params);
}

std::vector<double> h_plus_grad_at(const SymMat& h, std::size_t num_targets,
                                   const EstimateSet& data, std::size_t target,
                                   std::span<const SensorPose> poses,
                                   const SensorModelParams& params) {
  const SymMat positive_part = project_psd(h);
  const double violation = positive_part.frob_norm();

  std::vector<double> grad(num_targets + 2 * poses.size(), 0.0);
  if (violation <= kZeroViolation) {
    for (double& g : grad) g = kPsiConstant;
    return grad;
  }

  // gamma block: d_j h = I for j == target, 0 otherwise.
  grad[target] = positive_part.trace() / violation;

  // control blocks: d h / d u_sj = -dQ/dr_j(r_s, xhat_target).
  const Vec2 xhat = data[target].xhat;
  for (std::size_t s = 0; s < poses.size(); ++s) {
    for (int j = 0; j < 2; ++j) {
      const SymMat dq = info_gradient(poses[s], xhat, params, j);
      grad[num_targets + 2 * s + j] = -frob_inner(dq, positive_part) / violation;
    }
  }
  return grad;
}

double nonlinear_violation(std::span<const Vec2> controls, const EstimateSet& data,
                           std::size_t target, std::span<const SensorPose> poses,
                           const SensorModelParams& params, double gamma_i) {
  if (target >= data.size())
    throw std::out_of_range("nonlinear_violation: target index out of range");
  if (controls.size() != poses.size())
    throw std::invalid_argument("nonlinear_violation: controls/poses size mismatch");

  const Vec2 xhat = data[target].xhat;
  SymMat h = SymMat::identity(2);
  h *= gamma_i;
  h -= data[target].info;
  for (std::size_t s = 0; s < poses.size(); ++s) {
    const SensorPose moved{poses[s].r + controls[s]};
    h -= info_matrix(moved, xhat, params);
  }
  return violation_norm(h);
}

double violation_bound(const EstimateSet& data, std::size_t target,
                       std::span<const SensorPose> poses, const SensorModelParams& params,
                       double tau_i, std::span<const double> delta) {
  double bound = std::sqrt(2.0) * tau_i + data[target].info.frob_norm();
  for (std::size_t s = 0; s < poses.size(); ++s) {
    bound += info_matrix(poses[s], data[target].xhat, params).frob_norm();
    for (int j = 0; j < 2; ++j)
      bound += delta[s] * info_gradient(poses[s], data[target].xhat, params, j).frob_norm();
  }
  return bound;
}

double grad_norm_bound(const EstimateSet& data, std::span<const SensorPose> poses,
                       const SensorModelParams& params) {
  const std::size_t m = data.size();
  double total = 0.0;
  // Every gamma entry's constant matrix is I (for its own constraint), whose
  // eigenvalue vector has 2-norm sqrt(2).
  total += 2.0 * static_cast<double>(m);
  for (std::size_t s = 0; s < poses.size(); ++s) {
    for (int j = 0; j < 2; ++j) {
      double worst = 0.0;
      for (std::size_t i = 0; i < m; ++i) {
        const SymMat dq = info_gradient(poses[s], data[i].xhat, params, j);
        const EigDecomp eig = sym_eig(dq);
        double sq = 0.0;
        for (double v : eig.values) sq += v * v;
        worst = std::max(worst, sq);
      }
      total += worst;
    }
  }
  return std::sqrt(total);
}

}  // namespace ascent
