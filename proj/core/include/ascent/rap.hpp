#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "ascent/constraint.hpp"
#include "ascent/estimate.hpp"
#include "ascent/icf.hpp"
#include "ascent/network.hpp"
#include "ascent/rng.hpp"
#include "ascent/sensor_model.hpp"
#include "ascent/worker_pool.hpp"

namespace ascent {

// Solver knobs. The step schedule alpha_k = a/(k + b) is diminishing,
// non-summable and square-summable for every a > 0, b >= 0, which validate()
// enforces.
struct SolverConfig {
  double alpha_a = 1.0;
  double alpha_b = 0.0;
  std::size_t k_max = 30;
  double early_stop_rel = 0.10;        // 0 disables the early exit
  std::size_t early_stop_window = 5;   // iterations between compared snapshots
  std::vector<double> tau;             // per-landmark eigenvalue thresholds [1/m^2]
  std::vector<double> delta;           // per-sensor control radii [m]
  bool diagnostics = false;

  double alpha(std::size_t k) const { return alpha_a / (static_cast<double>(k) + alpha_b); }
  void validate(std::size_t num_targets, std::size_t num_sensors) const;
};

// One sensor's mutable solver state. Owned by exactly one worker; everything
// an agent reads from its neighbors is an immutable snapshot of the previous
// round.
struct AgentState {
  std::size_t id = 0;
  SensorPose pose;
  DecisionVector z;
  InfoSummary summary;
  EstimateSet data;     // local reconstruction D_{s,k}
  RngStream rng;
  DecisionVector last_mixed;      // p_{s,k}
  DecisionVector last_objective;  // v_{s,k}
};

struct RoundDiagnostics {
  std::size_t k = 0;
  std::size_t sensor = 0;
  double h_plus_value = 0.0;
  double beta = 0.0;
  double grad_norm = 0.0;
  double dist_to_mean = 0.0;
  double nu = 0.0;          // constraint-value error vs reference data
  double delta_norm = 0.0;  // constraint-gradient error vs reference data
};

struct InnerLoopResult {
  std::size_t rounds = 0;
  bool early_stopped = false;
  std::vector<RoundDiagnostics> diagnostics;
};

struct InnerLoopContext {
  const CommGraph* graph = nullptr;
  const SensorModelParams* sensor_params = nullptr;
  const SolverConfig* solver = nullptr;
  // When set, summaries are (re)initialized from these measurements before
  // the first round; when null the agents' existing summaries are used.
  const std::vector<ObservationSet>* observations = nullptr;
  double dropout_prob = 0.0;
  RngStream* dropout_rng = nullptr;
  // Converged-data oracle enabling the nu/delta error diagnostics.
  const EstimateSet* reference_data = nullptr;
  const WorkerPool* pool = nullptr;
};

// Exact Euclidean projection onto X0: gamma_i clamped to [0, tau_i], each u_s
// radially scaled onto the ball of radius delta_s.
DecisionVector project_x0(DecisionVector z, const SolverConfig& config);

// Convex combination of iterates; weights[0] belongs to own.
DecisionVector consensus_mix(const DecisionVector& own,
                             std::span<const DecisionVector* const> neighbors,
                             std::span<const double> weights);

// Subgradient step on the objective -sum gamma_i: every gamma coordinate
// moves up by alpha_k, controls are untouched, then project back to X0.
DecisionVector objective_step(DecisionVector p, double alpha_k, const SolverConfig& config);

// Uniform landmark index from the agent-local stream.
std::size_t sample_constraint(RngStream& rng, std::size_t num_targets);

// Polyak-stepped violation reduction of one sampled constraint. A feasible
// input is returned unchanged (zero step).
DecisionVector approximate_projection(const DecisionVector& v, const EstimateSet& data,
                                      std::size_t omega, std::span<const SensorPose> poses,
                                      const SensorModelParams& params, const SolverConfig& config,
                                      double* h_plus_out = nullptr, double* beta_out = nullptr,
                                      double* grad_norm_out = nullptr);

// One synchronized filtering + planning window: k_max rounds of broadcast,
// iterate mixing, summary mixing, reconstruction, objective step and random
// approximate projection, with an optional relative-change early exit.
// Throws on non-finite iterates (divergence guard).
InnerLoopResult inner_loop(std::vector<AgentState>& agents, const InnerLoopContext& ctx);

// Exact average of the agents' would-be initial summaries, reconstructed:
// the fixed point the consensus passes converge to within one window. Serves
// as the reference data for the nu/delta error diagnostics.
EstimateSet consensus_reference(const std::vector<AgentState>& agents,
                                const std::vector<ObservationSet>& observations,
                                std::span<const SensorPose> poses,
                                const SensorModelParams& params);

}  // namespace ascent
