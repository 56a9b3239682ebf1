#include "ascent/mission.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "ascent/icf.hpp"

namespace ascent {

namespace {

constexpr double kBootstrapTol = 1e-12;
constexpr std::size_t kBootstrapRoundCap = 5000;

std::vector<Vec2> place_landmarks(const ScenarioConfig& config) {
  if (config.landmark_source == "file") return load_landmarks(config.landmark_file);
  RngStream rng(config.seed, kLandmarkStream);
  std::vector<Vec2> points(config.num_targets);
  for (Vec2& p : points) {
    p[0] = config.workspace_side * rng.uniform01();
    p[1] = config.workspace_side * rng.uniform01();
  }
  return points;
}

std::vector<SensorPose> start_poses(const ScenarioConfig& config) {
  if (config.sensor_start) {
    std::vector<SensorPose> poses(config.num_sensors);
    for (std::size_t s = 0; s < config.num_sensors; ++s) poses[s] = {(*config.sensor_start)[s]};
    return poses;
  }
  // Default: a compact cluster near the workspace corner, spaced well inside
  // the communication radius.
  const double base = 0.05 * config.workspace_side;
  const double spacing = std::min(0.4 * config.comm_radius, 0.08 * config.workspace_side);
  std::vector<SensorPose> poses(config.num_sensors);
  for (std::size_t s = 0; s < config.num_sensors; ++s)
    poses[s] = {Vec2{base + spacing * static_cast<double>(s), base}};
  return poses;
}

std::vector<ObservationSet> sample_all_observations(WorldState& world,
                                                    const ScenarioConfig& config,
                                                    const WorkerPool& pool) {
  const std::size_t n = world.agents.size();
  std::vector<ObservationSet> obs(n);
  pool.parallel_for(n, [&](std::size_t s) {
    AgentState& agent = world.agents[s];
    obs[s].resize(world.truths.size());
    for (std::size_t i = 0; i < world.truths.size(); ++i)
      obs[s][i] = sample_observation(agent.rng, agent.pose, world.truths[i], config.sensor);
  });
  return obs;
}

SolverConfig solver_config(const ScenarioConfig& config) {
  SolverConfig solver;
  solver.alpha_a = config.alpha_a;
  solver.alpha_b = config.alpha_b;
  solver.k_max = config.k_max;
  solver.early_stop_rel = config.early_stop_rel;
  solver.tau = config.resolved_tau();
  solver.delta = config.resolved_delta();
  solver.diagnostics = config.inner_diagnostics;
  return solver;
}

// Consensus-average the bootstrap summaries to the common fixed point, then
// hand every agent the same reconstruction.
void bootstrap(WorldState& world, const ScenarioConfig& config) {
  const std::size_t n = world.agents.size();
  const std::vector<SensorPose> poses = world.poses();
  const WeightMatrix weights = metropolis_weights(world.graph);

  std::vector<ObservationSet> obs(n);
  for (std::size_t s = 0; s < n; ++s) {
    obs[s].resize(world.truths.size());
    for (std::size_t i = 0; i < world.truths.size(); ++i)
      obs[s][i] = sample_observation(world.agents[s].rng, world.agents[s].pose,
                                     world.truths[i], config.sensor);
  }

  std::vector<InfoSummary> summaries(n);
  for (std::size_t s = 0; s < n; ++s)
    summaries[s] = bootstrap_summary(s, obs[s], poses, config.sensor);

  std::vector<InfoSummary> next(n);
  for (std::size_t round = 0; round < kBootstrapRoundCap; ++round) {
    double disagreement = 0.0;
    for (std::size_t s = 1; s < n; ++s)
      disagreement = std::max(disagreement, summary_distance(summaries[s], summaries[0]));
    if (disagreement <= kBootstrapTol) break;
    for (std::size_t s = 0; s < n; ++s) {
      std::vector<double> row;
      std::vector<const InfoSummary*> neighbors;
      row.push_back(weights.at(s, s));
      for (std::size_t v : world.graph.adjacency[s]) {
        row.push_back(weights.at(s, v));
        neighbors.push_back(&summaries[v]);
      }
      next[s] = consensus_step(summaries[s], neighbors, row);
    }
    summaries.swap(next);
  }

  for (std::size_t s = 0; s < n; ++s) {
    world.agents[s].summary = summaries[s];
    world.agents[s].data = reconstruct_data(summaries[s], n, world.agents[s].data);
  }
}

void append_step_metrics(const WorldState& world, MetricsHistory& history,
                         const std::vector<Vec2>& controls,
                         const std::vector<double>& violations) {
  StepMetrics row;
  row.t = world.t;
  const std::size_t m = world.truths.size();
  row.landmarks.resize(m);
  for (std::size_t i = 0; i < m; ++i) {
    double lambda = std::numeric_limits<double>::infinity();
    double error = 0.0;
    for (const AgentState& agent : world.agents) {
      lambda = std::min(lambda, min_eigenvalue(agent.data[i].info));
      error = std::max(error, dist(agent.data[i].xhat, world.truths[i].x));
    }
    row.landmarks[i] = {lambda, error, violations.empty() ? 0.0 : violations[i]};
  }
  row.sensors.resize(world.agents.size());
  for (std::size_t s = 0; s < world.agents.size(); ++s)
    row.sensors[s] = {world.agents[s].pose.r,
                      controls.empty() ? Vec2{0.0, 0.0} : controls[s]};
  history.steps.push_back(std::move(row));
}

void update_done_flags(WorldState& world, const ScenarioConfig& config) {
  const std::vector<double> tau = config.resolved_tau();
  for (std::size_t i = 0; i < world.truths.size(); ++i) {
    if (world.done[i]) continue;  // information only accumulates
    double lambda = std::numeric_limits<double>::infinity();
    for (const AgentState& agent : world.agents)
      lambda = std::min(lambda, min_eigenvalue(agent.data[i].info));
    world.done[i] = lambda >= tau[i];
  }
}

}  // namespace

std::vector<SensorPose> WorldState::poses() const {
  std::vector<SensorPose> out(agents.size());
  for (std::size_t s = 0; s < agents.size(); ++s) out[s] = agents[s].pose;
  return out;
}

WorldState initialize(const ScenarioConfig& config) {
  config.validate();

  WorldState world;
  world.t = 0;
  const std::vector<Vec2> landmarks = place_landmarks(config);
  if (landmarks.size() != config.num_targets)
    throw ConfigError("landmark_file: expected " + std::to_string(config.num_targets) +
                      " landmarks, found " + std::to_string(landmarks.size()));
  world.truths.reserve(landmarks.size());
  for (const Vec2& x : landmarks) world.truths.push_back({x});

  const std::vector<SensorPose> poses = start_poses(config);
  world.graph = build_graph(poses, config.comm_radius);
  if (!check_connectivity(world.graph).connected)
    throw ConfigError("sensor_start: initial communication graph is disconnected");

  const Vec2 center{0.5 * config.workspace_side, 0.5 * config.workspace_side};
  world.agents.resize(config.num_sensors);
  for (std::size_t s = 0; s < config.num_sensors; ++s) {
    AgentState& agent = world.agents[s];
    agent.id = s;
    agent.pose = poses[s];
    agent.z = DecisionVector(config.num_targets, config.num_sensors);
    agent.rng = RngStream(config.seed, kAgentStreamBase + s);
    agent.data.targets.assign(config.num_targets, TargetEstimate{center, SymMat(2)});
  }
  world.dropout_rng = RngStream(config.seed, kDropoutStream);
  world.done.assign(config.num_targets, false);

  bootstrap(world, config);
  update_done_flags(world, config);
  return world;
}

void step(WorldState& world, const ScenarioConfig& config, MetricsHistory& history,
          const WorkerPool* pool) {
  const WorkerPool serial(1);
  const WorkerPool& workers = pool ? *pool : serial;
  const std::size_t n = world.agents.size();
  const std::size_t m = world.truths.size();
  const std::vector<SensorPose> poses = world.poses();

  const std::vector<ObservationSet> obs = sample_all_observations(world, config, workers);

  // Fresh feasible iterate each planning window.
  for (AgentState& agent : world.agents)
    agent.z = DecisionVector(config.num_targets, config.num_sensors);

  const SolverConfig solver = solver_config(config);
  EstimateSet reference;
  InnerLoopContext ctx;
  ctx.graph = &world.graph;
  ctx.sensor_params = &config.sensor;
  ctx.solver = &solver;
  ctx.observations = &obs;
  ctx.dropout_prob = config.dropout;
  ctx.dropout_rng = &world.dropout_rng;
  ctx.pool = &workers;
  if (config.inner_diagnostics) {
    reference = consensus_reference(world.agents, obs, poses, config.sensor);
    ctx.reference_data = &reference;
  }

  const InnerLoopResult inner = inner_loop(world.agents, ctx);

  std::vector<Vec2> proposed(n);
  for (std::size_t s = 0; s < n; ++s) proposed[s] = world.agents[s].z.u(s);
  const std::vector<Vec2> controls =
      connectivity_filter(poses, proposed, config.comm_radius);

  // Linearization-error diagnostic: the floor each agent would certify from
  // the linearized constraint at the applied controls, checked against the
  // true information collected at the moved poses. Worst case over the team.
  const std::vector<double> tau = config.resolved_tau();
  std::vector<double> violations(m, 0.0);
  for (std::size_t i = 0; i < m; ++i) {
    for (const AgentState& agent : world.agents) {
      SymMat linearized = agent.data[i].info;
      for (std::size_t v = 0; v < n; ++v) {
        linearized += info_matrix(poses[v], agent.data[i].xhat, config.sensor);
        for (int j = 0; j < 2; ++j) {
          SymMat g = info_gradient(poses[v], agent.data[i].xhat, config.sensor, j);
          g *= controls[v][j];
          linearized += g;
        }
      }
      const double certified = std::clamp(min_eigenvalue(linearized), 0.0, tau[i]);
      violations[i] = std::max(
          violations[i], nonlinear_violation(controls, agent.data, i, poses, config.sensor,
                                             certified));
    }
  }

  for (std::size_t s = 0; s < n; ++s)
    world.agents[s].pose.r = world.agents[s].pose.r + controls[s];
  world.graph = build_graph(world.poses(), config.comm_radius);
  if (!check_connectivity(world.graph).connected)
    throw std::runtime_error("step: communication graph disconnected after filtered move");

  world.t += 1;
  update_done_flags(world, config);
  append_step_metrics(world, history, controls, violations);
  for (const RoundDiagnostics& d : inner.diagnostics) history.inner.push_back({world.t, d});
}

MetricsHistory run(const ScenarioConfig& config, const WorkerPool* pool,
                   const StepCallback& on_step) {
  WorldState world = initialize(config);
  MetricsHistory history;
  append_step_metrics(world, history, {}, {});

  auto all_done = [&] {
    return std::all_of(world.done.begin(), world.done.end(), [](bool d) { return d; });
  };

  while (!all_done() && world.t < config.t_max) {
    step(world, config, history, pool);
    if (on_step) on_step(world, history);
  }

  history.all_done = all_done();
  history.timed_out = !history.all_done;
  history.termination_t = world.t;
  return history;
}

}  // namespace ascent
