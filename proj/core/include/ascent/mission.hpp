#pragma once

#include <functional>
#include <vector>

#include "ascent/config.hpp"
#include "ascent/metrics.hpp"
#include "ascent/network.hpp"
#include "ascent/rap.hpp"

namespace ascent {

// Full simulation state: hidden landmark truths, the sensor team and its
// communication graph, plus per-landmark completion flags.
struct WorldState {
  std::size_t t = 0;
  std::vector<TargetTruth> truths;
  std::vector<AgentState> agents;
  CommGraph graph;
  std::vector<bool> done;
  RngStream dropout_rng;

  std::vector<SensorPose> poses() const;
};

// Places landmarks (uniform or from file), validates the initial graph and
// runs the uninformative-prior bootstrap: every agent's data starts from the
// consensus fusion of the first observations.
WorldState initialize(const ScenarioConfig& config);

// One outer step: observe, fuse + plan concurrently, filter controls for
// connectivity, move, rebuild the graph and append metrics for the new time.
void step(WorldState& world, const ScenarioConfig& config, MetricsHistory& history,
          const WorkerPool* pool = nullptr);

// Runs until every landmark's eigenvalue floor clears its threshold or t_max
// is hit (partial history with the timeout flag). The callback, when given,
// fires after every step.
using StepCallback = std::function<void(const WorldState&, const MetricsHistory&)>;
MetricsHistory run(const ScenarioConfig& config, const WorkerPool* pool = nullptr,
                   const StepCallback& on_step = nullptr);

}  // namespace ascent
