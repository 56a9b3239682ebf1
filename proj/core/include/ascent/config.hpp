#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "ascent/sensor_model.hpp"
#include "ascent/vec.hpp"

namespace ascent {

// Raised on unknown keys, type mismatches and constraint violations; the
// message always names the offending key.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Scenario description parsed from the line-oriented `key = value` format.
// Every field has a documented default; an empty file is a valid scenario.
struct ScenarioConfig {
  double workspace_side = 10.0;   // [m]
  std::size_t num_sensors = 4;    // key: sensors
  std::size_t num_targets = 100;  // key: landmarks

  SensorModelParams sensor;  // keys: c0, c1, rho, range_max, pos_epsilon

  std::vector<double> tau_list{9.0};  // key: tau, scalar or comma list [1/m^2]
  double delta = 1.0;                 // control radius [m]

  double comm_radius = 4.0;  // [m]
  double dropout = 0.0;      // per-round link failure probability

  double alpha_a = 1.0;  // step schedule a/(k + b)
  double alpha_b = 0.0;
  std::size_t k_max = 30;
  double early_stop_rel = 0.10;

  std::size_t t_max = 2000;
  std::uint64_t seed = 1;

  std::string landmark_source = "uniform";  // uniform | file
  std::string landmark_file;
  std::string output_dir = "out";
  std::optional<std::vector<Vec2>> sensor_start;  // key: sensor_start, "x y; x y; ..."
  bool inner_diagnostics = false;

  // tau broadcast to one entry per landmark.
  std::vector<double> resolved_tau() const;
  std::vector<double> resolved_delta() const;

  void validate() const;  // throws ConfigError naming the key
};

ScenarioConfig parse_config(const std::string& text);
ScenarioConfig load_config(const std::string& path);

// Landmark file: one `x y` pair per line, `#` comments.
std::vector<Vec2> load_landmarks(const std::string& path);

}  // namespace ascent
