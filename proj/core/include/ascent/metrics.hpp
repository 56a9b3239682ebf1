#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "ascent/config.hpp"
#include "ascent/rap.hpp"
#include "ascent/vec.hpp"

namespace ascent {

struct LandmarkMetric {
  double lambda_min = 0.0;           // worst eigenvalue floor across agents [1/m^2]
  double error_m = 0.0;              // worst true estimation error across agents [m]
  double nonlinear_violation = 0.0;  // linearization-error diagnostic
};

struct SensorMetric {
  Vec2 position{0.0, 0.0};
  Vec2 control{0.0, 0.0};  // displacement applied to reach this position
};

struct StepMetrics {
  std::size_t t = 0;
  std::vector<LandmarkMetric> landmarks;
  std::vector<SensorMetric> sensors;
};

struct InnerMetric {
  std::size_t t = 0;
  RoundDiagnostics round;
};

struct MetricsHistory {
  std::vector<StepMetrics> steps;
  std::vector<InnerMetric> inner;  // populated when inner diagnostics are on
  bool all_done = false;
  bool timed_out = false;
  std::size_t termination_t = 0;
};

// Writes eigs.csv, errors.csv, violations.csv, trajectories.csv,
// diagnostics.csv (when inner rows exist) and summary.json into dir,
// creating it if needed. Output is byte-deterministic for a given history.
void emit_metrics(const MetricsHistory& history, const ScenarioConfig& config,
                  const std::string& dir);

// Static SVG plots rendered without external tools: eigenvalue band with the
// tau threshold, error band with the accuracy threshold, per-landmark
// violation traces and trajectory snapshot panels.
void emit_plots(const MetricsHistory& history, const ScenarioConfig& config,
                const std::string& dir);

// Rebuilds the SVG plots from a metrics directory previously written by
// emit_metrics (reads the CSVs and summary.json back).
void plots_from_dir(const std::string& metrics_dir);

}  // namespace ascent
