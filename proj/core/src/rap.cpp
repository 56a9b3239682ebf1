#include "ascent/rap.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <stdexcept>
#include <string>

namespace ascent {

void SolverConfig::validate(std::size_t num_targets, std::size_t num_sensors) const {
  if (!(alpha_a > 0.0) || !std::isfinite(alpha_a))
    throw std::invalid_argument("alpha_a: must be > 0");
  if (!(alpha_b >= 0.0) || !std::isfinite(alpha_b))
    throw std::invalid_argument("alpha_b: must be >= 0");
  if (tau.size() != num_targets) throw std::invalid_argument("tau: one entry per landmark");
  for (double t : tau)
    if (!(t >= 0.0) || !std::isfinite(t)) throw std::invalid_argument("tau: must be >= 0");
  if (delta.size() != num_sensors) throw std::invalid_argument("delta: one entry per sensor");
  for (double d : delta)
    if (!(d > 0.0) || !std::isfinite(d)) throw std::invalid_argument("delta: must be > 0");
  if (!(early_stop_rel >= 0.0)) throw std::invalid_argument("early_stop_rel: must be >= 0");
  if (early_stop_window < 1) throw std::invalid_argument("early_stop_window: must be >= 1");
}

DecisionVector project_x0(DecisionVector z, const SolverConfig& config) {
  for (std::size_t i = 0; i < z.num_targets(); ++i)
    z.set_gamma(i, std::clamp(z.gamma(i), 0.0, config.tau[i]));
  for (std::size_t s = 0; s < z.num_sensors(); ++s) {
    const Vec2 u = z.u(s);
    const double len = norm(u);
    if (len > config.delta[s]) z.set_u(s, (config.delta[s] / len) * u);
  }
  return z;
}

DecisionVector consensus_mix(const DecisionVector& own,
                             std::span<const DecisionVector* const> neighbors,
                             std::span<const double> weights) {
  if (weights.size() != neighbors.size() + 1)
    throw std::invalid_argument("consensus_mix: one weight per iterate required");
  double sum = 0.0;
  for (double w : weights) {
    if (w < 0.0) throw std::invalid_argument("consensus_mix: negative weight");
    sum += w;
  }
  if (std::abs(sum - 1.0) > 1e-12)
    throw std::invalid_argument("consensus_mix: weight row is not stochastic");

  DecisionVector mixed(own.num_targets(), own.num_sensors());
  for (std::size_t k = 0; k < mixed.size(); ++k) {
    double v = weights[0] * own[k];
    for (std::size_t j = 0; j < neighbors.size(); ++j) v += weights[j + 1] * (*neighbors[j])[k];
    mixed[k] = v;
  }
  return mixed;
}

DecisionVector objective_step(DecisionVector p, double alpha_k, const SolverConfig& config) {
  for (std::size_t i = 0; i < p.num_targets(); ++i) p.set_gamma(i, p.gamma(i) + alpha_k);
  return project_x0(std::move(p), config);
}

std::size_t sample_constraint(RngStream& rng, std::size_t num_targets) {
  if (num_targets < 1) throw std::invalid_argument("sample_constraint: no landmarks");
  return rng.uniform_below(static_cast<std::uint32_t>(num_targets));
}

DecisionVector approximate_projection(const DecisionVector& v, const EstimateSet& data,
                                      std::size_t omega, std::span<const SensorPose> poses,
                                      const SensorModelParams& params, const SolverConfig& config,
                                      double* h_plus_out, double* beta_out,
                                      double* grad_norm_out) {
  const SymMat h = assemble_h(v, data, omega, poses, params);
  const double violation = violation_norm(h);
  if (h_plus_out) *h_plus_out = violation;

  if (violation <= 0.0) {
    if (beta_out) *beta_out = 0.0;
    if (grad_norm_out) *grad_norm_out = 0.0;
    return v;
  }

  const std::vector<double> grad = h_plus_grad_at(h, v.num_targets(), data, omega, poses, params);
  double grad_sq = 0.0;
  for (double g : grad) grad_sq += g * g;
  const double beta = violation / grad_sq;
  if (beta_out) *beta_out = beta;
  if (grad_norm_out) *grad_norm_out = std::sqrt(grad_sq);

  DecisionVector stepped = v;
  for (std::size_t k = 0; k < stepped.size(); ++k) stepped[k] -= beta * grad[k];
  return project_x0(std::move(stepped), config);
}

namespace {

struct Snapshot {
  DecisionVector z;
  EstimateSet data;
};

std::string dump_agent(const AgentState& agent, std::size_t round) {
  std::string msg = "round " + std::to_string(round) + ", sensor " + std::to_string(agent.id) +
                    ", z = [";
  for (std::size_t k = 0; k < agent.z.size(); ++k) {
    if (k) msg += ", ";
    msg += std::to_string(agent.z[k]);
  }
  return msg + "]";
}

}  // namespace

EstimateSet consensus_reference(const std::vector<AgentState>& agents,
                                const std::vector<ObservationSet>& observations,
                                std::span<const SensorPose> poses,
                                const SensorModelParams& params) {
  const std::size_t n = agents.size();
  std::vector<InfoSummary> parts(n);
  for (std::size_t s = 0; s < n; ++s)
    parts[s] = init_summary(s, agents[s].data, observations[s], poses, params, n);
  InfoSummary mean = parts[0];
  const double inv_n = 1.0 / static_cast<double>(n);
  for (std::size_t i = 0; i < mean.size(); ++i) {
    for (std::size_t s = 1; s < n; ++s) {
      mean.big_xi[i] += parts[s].big_xi[i];
      mean.small_xi[i] = mean.small_xi[i] + parts[s].small_xi[i];
    }
    mean.big_xi[i] *= inv_n;
    mean.small_xi[i] = inv_n * mean.small_xi[i];
  }
  return reconstruct_data(mean, n, agents[0].data);
}

InnerLoopResult inner_loop(std::vector<AgentState>& agents, const InnerLoopContext& ctx) {
  if (!ctx.graph || !ctx.sensor_params || !ctx.solver)
    throw std::invalid_argument("inner_loop: missing context");
  const std::size_t n = agents.size();
  if (n == 0) return {};
  const std::size_t m = agents[0].z.num_targets();
  const SolverConfig& solver = *ctx.solver;
  solver.validate(m, n);

  std::vector<SensorPose> poses(n);
  for (std::size_t s = 0; s < n; ++s) poses[s] = agents[s].pose;

  const WorkerPool serial_pool(1);
  const WorkerPool& pool = ctx.pool ? *ctx.pool : serial_pool;

  // Start from a feasible iterate and fresh data summaries.
  for (AgentState& agent : agents) {
    agent.z = project_x0(agent.z, solver);
    if (ctx.observations)
      agent.summary =
          init_summary(agent.id, agent.data, (*ctx.observations)[agent.id], poses,
                       *ctx.sensor_params, n);
  }

  InnerLoopResult result;
  const WeightMatrix base_weights = metropolis_weights(*ctx.graph);

  std::vector<DecisionVector> z_prev(n);
  std::vector<InfoSummary> summary_prev(n);
  std::vector<std::deque<Snapshot>> history(n);
  std::vector<RoundDiagnostics> round_diag(n);

  for (std::size_t k = 1; k <= solver.k_max; ++k) {
    // Broadcast: neighbors read immutable snapshots of round k-1.
    for (std::size_t s = 0; s < n; ++s) {
      z_prev[s] = agents[s].z;
      summary_prev[s] = agents[s].summary;
    }

    CommGraph effective;
    const CommGraph* graph = ctx.graph;
    const WeightMatrix* weights = &base_weights;
    WeightMatrix dropped_weights;
    if (ctx.dropout_prob > 0.0 && ctx.dropout_rng) {
      effective = drop_edges(*ctx.graph, *ctx.dropout_rng, ctx.dropout_prob);
      dropped_weights = metropolis_weights(effective);
      graph = &effective;
      weights = &dropped_weights;
    }

    const double alpha_k = solver.alpha(k);
    pool.parallel_for(n, [&](std::size_t s) {
      AgentState& agent = agents[s];
      const std::vector<std::size_t>& neighbors = graph->adjacency[s];

      std::vector<double> row;
      row.reserve(neighbors.size() + 1);
      row.push_back(weights->at(s, s));
      std::vector<const DecisionVector*> z_neighbors;
      std::vector<const InfoSummary*> summary_neighbors;
      z_neighbors.reserve(neighbors.size());
      summary_neighbors.reserve(neighbors.size());
      for (std::size_t v : neighbors) {
        row.push_back(weights->at(s, v));
        z_neighbors.push_back(&z_prev[v]);
        summary_neighbors.push_back(&summary_prev[v]);
      }

      agent.last_mixed = consensus_mix(z_prev[s], z_neighbors, row);
      agent.summary = consensus_step(summary_prev[s], summary_neighbors, row);
      agent.data = reconstruct_data(agent.summary, n, agent.data);
      agent.last_objective = objective_step(agent.last_mixed, alpha_k, solver);

      const std::size_t omega = sample_constraint(agent.rng, m);
      RoundDiagnostics diag;
      diag.k = k;
      diag.sensor = s;
      agent.z = approximate_projection(agent.last_objective, agent.data, omega, poses,
                                       *ctx.sensor_params, solver, &diag.h_plus_value,
                                       &diag.beta, &diag.grad_norm);

      if (solver.diagnostics && diag.h_plus_value > kZeroViolation) {
        // Contract checks on the violation value and its gradient: both are
        // bounded by constants computable from the data alone.
        const double value_cap = violation_bound(agent.data, omega, poses, *ctx.sensor_params,
                                                 solver.tau[omega], solver.delta);
        const double grad_cap = grad_norm_bound(agent.data, poses, *ctx.sensor_params);
        if (diag.h_plus_value > value_cap + 1e-9 || diag.grad_norm > grad_cap + 1e-9)
          throw std::runtime_error("inner_loop: violation bounds breached; " +
                                   dump_agent(agent, k));
      }

      if (ctx.reference_data) {
        // Errors of the pre-consensus data against the converged reference,
        // evaluated at the updated iterate.
        const double local = h_plus(agent.z, agent.data, omega, poses, *ctx.sensor_params);
        const double exact = h_plus(agent.z, *ctx.reference_data, omega, poses,
                                    *ctx.sensor_params);
        diag.nu = local - exact;
        const std::vector<double> g_local =
            h_plus_grad(agent.z, agent.data, omega, poses, *ctx.sensor_params);
        const std::vector<double> g_exact =
            h_plus_grad(agent.z, *ctx.reference_data, omega, poses, *ctx.sensor_params);
        double acc = 0.0;
        for (std::size_t j = 0; j < g_local.size(); ++j) {
          const double d = g_local[j] - g_exact[j];
          acc += d * d;
        }
        diag.delta_norm = std::sqrt(acc);
      }
      round_diag[s] = diag;
    });

    // Non-finite iterates cannot arise from finite inputs; stop with a dump.
    for (const AgentState& agent : agents)
      if (!agent.z.finite())
        throw std::runtime_error("inner_loop: non-finite iterate; " + dump_agent(agent, k));

    if (solver.diagnostics || ctx.reference_data) {
      DecisionVector mean(m, n);
      for (std::size_t j = 0; j < mean.size(); ++j) {
        double acc = 0.0;
        for (const AgentState& agent : agents) acc += agent.z[j];
        mean[j] = acc / static_cast<double>(n);
      }
      for (std::size_t s = 0; s < n; ++s) {
        round_diag[s].dist_to_mean = distance(agents[s].z, mean);
        result.diagnostics.push_back(round_diag[s]);
      }
    }

    result.rounds = k;

    if (solver.early_stop_rel > 0.0) {
      const std::size_t window = solver.early_stop_window;
      bool all_settled = true;
      for (std::size_t s = 0; s < n; ++s) {
        history[s].push_back({agents[s].z, agents[s].data});
        if (history[s].size() > window + 1) history[s].pop_front();
        if (history[s].size() <= window) {
          all_settled = false;
          continue;
        }
        const Snapshot& old = history[s].front();
        const double z_rel =
            distance(agents[s].z, old.z) / std::max(vec_norm(agents[s].z), 1e-9);
        const double d_rel =
            data_distance(agents[s].data, old.data) / std::max(data_norm(agents[s].data), 1e-9);
        if (z_rel > solver.early_stop_rel || d_rel > solver.early_stop_rel) all_settled = false;
      }
      if (all_settled) {
        result.early_stopped = true;
        break;
      }
    }
  }

  return result;
}

}  // namespace ascent
