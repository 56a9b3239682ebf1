#include "ascent/metrics.hpp"

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <limits>
#include <stdexcept>

#include <json.hpp>

namespace ascent {

namespace {

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.12g", v);
  return buf;
}

void write_file(const std::string& dir, const std::string& name, const std::string& body) {
  const std::filesystem::path path = std::filesystem::path(dir) / name;
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << body;
  if (!out) throw std::runtime_error("write failed: " + path.string());
}

nlohmann::json config_echo(const ScenarioConfig& c) {
  nlohmann::json j;
  j["workspace_side"] = c.workspace_side;
  j["sensors"] = c.num_sensors;
  j["landmarks"] = c.num_targets;
  j["c0"] = c.sensor.c0;
  j["c1"] = c.sensor.c1;
  j["rho"] = c.sensor.rho;
  if (c.sensor.range_max)
    j["range_max"] = *c.sensor.range_max;
  else
    j["range_max"] = nullptr;
  j["pos_epsilon"] = c.sensor.pos_epsilon;
  j["tau"] = c.tau_list;
  j["delta"] = c.delta;
  j["comm_radius"] = c.comm_radius;
  j["dropout"] = c.dropout;
  j["alpha_a"] = c.alpha_a;
  j["alpha_b"] = c.alpha_b;
  j["k_max"] = c.k_max;
  j["early_stop_rel"] = c.early_stop_rel;
  j["t_max"] = c.t_max;
  j["seed"] = c.seed;
  j["landmark_source"] = c.landmark_source;
  j["landmark_file"] = c.landmark_file;
  j["output_dir"] = c.output_dir;
  if (c.sensor_start) {
    nlohmann::json points = nlohmann::json::array();
    for (const Vec2& p : *c.sensor_start) points.push_back({p[0], p[1]});
    j["sensor_start"] = points;
  } else {
    j["sensor_start"] = nullptr;
  }
  j["inner_diagnostics"] = c.inner_diagnostics;
  return j;
}

}  // namespace

void emit_metrics(const MetricsHistory& history, const ScenarioConfig& config,
                  const std::string& dir) {
  std::filesystem::create_directories(dir);

  std::string eigs = "t,landmark,lambda_min\n";
  std::string errors = "t,landmark,error_m\n";
  std::string violations = "t,landmark,nonlinear_violation\n";
  for (const StepMetrics& row : history.steps) {
    for (std::size_t i = 0; i < row.landmarks.size(); ++i) {
      const std::string prefix = std::to_string(row.t) + "," + std::to_string(i) + ",";
      eigs += prefix + fmt(row.landmarks[i].lambda_min) + "\n";
      errors += prefix + fmt(row.landmarks[i].error_m) + "\n";
      violations += prefix + fmt(row.landmarks[i].nonlinear_violation) + "\n";
    }
  }
  write_file(dir, "eigs.csv", eigs);
  write_file(dir, "errors.csv", errors);
  write_file(dir, "violations.csv", violations);

  std::string traj = "t,sensor,x,y,ux,uy\n";
  for (const StepMetrics& row : history.steps) {
    for (std::size_t s = 0; s < row.sensors.size(); ++s) {
      traj += std::to_string(row.t) + "," + std::to_string(s) + "," +
              fmt(row.sensors[s].position[0]) + "," + fmt(row.sensors[s].position[1]) + "," +
              fmt(row.sensors[s].control[0]) + "," + fmt(row.sensors[s].control[1]) + "\n";
    }
  }
  write_file(dir, "trajectories.csv", traj);

  if (!history.inner.empty()) {
    std::string diag = "t,k,sensor,h_plus,beta,grad_norm,dist_to_mean,nu,delta_norm\n";
    for (const InnerMetric& row : history.inner) {
      diag += std::to_string(row.t) + "," + std::to_string(row.round.k) + "," +
              std::to_string(row.round.sensor) + "," + fmt(row.round.h_plus_value) + "," +
              fmt(row.round.beta) + "," + fmt(row.round.grad_norm) + "," +
              fmt(row.round.dist_to_mean) + "," + fmt(row.round.nu) + "," +
              fmt(row.round.delta_norm) + "\n";
    }
    write_file(dir, "diagnostics.csv", diag);
  }

  nlohmann::json summary;
  summary["format_version"] = 1;
  summary["seed"] = config.seed;
  summary["termination_t"] = history.termination_t;
  summary["all_done"] = history.all_done;
  summary["timed_out"] = history.timed_out;

  nlohmann::json final_stats;
  if (!history.steps.empty()) {
    const StepMetrics& last = history.steps.back();
    double lambda_worst = std::numeric_limits<double>::infinity();
    double lambda_sum = 0.0;
    double error_worst = 0.0;
    double error_sum = 0.0;
    std::size_t done_count = 0;
    const std::vector<double> tau = config.resolved_tau();
    for (std::size_t i = 0; i < last.landmarks.size(); ++i) {
      lambda_worst = std::min(lambda_worst, last.landmarks[i].lambda_min);
      lambda_sum += last.landmarks[i].lambda_min;
      error_worst = std::max(error_worst, last.landmarks[i].error_m);
      error_sum += last.landmarks[i].error_m;
      if (last.landmarks[i].lambda_min >= tau[i]) ++done_count;
    }
    const double count = static_cast<double>(last.landmarks.size());
    final_stats["lambda_min_worst"] = lambda_worst;
    final_stats["lambda_min_mean"] = lambda_sum / count;
    final_stats["error_worst"] = error_worst;
    final_stats["error_mean"] = error_sum / count;
    final_stats["done_count"] = done_count;
  }
  summary["final"] = final_stats;
  summary["config"] = config_echo(config);
  write_file(dir, "summary.json", summary.dump(2) + "\n");
}

}  // namespace ascent
