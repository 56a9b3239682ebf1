#pragma once

#include <optional>
#include <span>
#include <vector>

#include "ascent/estimate.hpp"
#include "ascent/sensor_model.hpp"

namespace ascent {

// One sensor's observations for a round: entry i is the measurement of
// landmark i, or empty when the landmark was out of range.
using ObservationSet = std::vector<std::optional<Vec2>>;

// Per-sensor information summary: one (Xi, xi) pair per landmark. Averaging
// these across the network makes n*Xi converge geometrically to the fused
// posterior information and Xi^-1 xi to the fused mean.
struct InfoSummary {
  std::vector<SymMat> big_xi;  // [1/m^2]
  std::vector<Vec2> small_xi;  // [1/m]

  std::size_t size() const { return big_xi.size(); }
};

double summary_distance(const InfoSummary& a, const InfoSummary& b);

// Xi = S_i/n + Q(r_s, xhat_i), xi = (S_i/n) xhat_i + Q y_is. A missing
// observation contributes Q = 0, leaving only the prior share.
InfoSummary init_summary(std::size_t sensor, const EstimateSet& prior,
                         const ObservationSet& obs, std::span<const SensorPose> poses,
                         const SensorModelParams& params, std::size_t n);

// Uninformative-prior bootstrap: Xi = Q(r_s, y_is) evaluated at the first
// observations themselves, xi = Q y_is; zero for unseen landmarks.
InfoSummary bootstrap_summary(std::size_t sensor, const ObservationSet& obs,
                              std::span<const SensorPose> poses,
                              const SensorModelParams& params);

// Convex combination of summaries: weights[0] applies to own, weights[1+k]
// to neighbors[k]. Throws when the row is not stochastic within 1e-12 or any
// weight is negative.
InfoSummary consensus_step(const InfoSummary& own, std::span<const InfoSummary* const> neighbors,
                           std::span<const double> weights);

// S_i = n Xi_i and xhat_i = Xi_i^-1 xi_i per landmark. A landmark whose
// information is numerically singular is reconstruction-unavailable: it keeps
// the fallback mean with information kSingularFallback * I so the planner
// still treats it as maximally uncertain. `available`, when given, records
// which landmarks reconstructed.
inline constexpr double kSingularFallback = 1e-9;
EstimateSet reconstruct_data(const InfoSummary& summary, std::size_t n,
                             const EstimateSet& fallback,
                             std::vector<bool>* available = nullptr);

// Exact-sum fusion oracle: S_i += sum_s Q(r_s, xhat_i), information-weighted
// mean update. Ground truth for consensus convergence tests.
EstimateSet centralized_fusion(const EstimateSet& prior,
                               std::span<const ObservationSet> obs_per_sensor,
                               std::span<const SensorPose> poses,
                               const SensorModelParams& params);

// Centralized equivalent of the bootstrap pass.
EstimateSet centralized_bootstrap(std::span<const ObservationSet> obs_per_sensor,
                                  std::span<const SensorPose> poses,
                                  const SensorModelParams& params, const EstimateSet& fallback);

}  // namespace ascent
