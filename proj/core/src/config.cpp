#include "ascent/config.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

namespace ascent {

namespace {

std::string trim(const std::string& s) {
  const auto begin = s.find_first_not_of(" \t\r");
  if (begin == std::string::npos) return "";
  const auto end = s.find_last_not_of(" \t\r");
  return s.substr(begin, end - begin + 1);
}

double parse_double(const std::string& key, const std::string& value, int line) {
  std::size_t used = 0;
  double out = 0.0;
  try {
    out = std::stod(value, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used != value.size() || !std::isfinite(out))
    throw ConfigError(key + ": expected a number, got '" + value + "' (line " +
                      std::to_string(line) + ")");
  return out;
}

std::size_t parse_count(const std::string& key, const std::string& value, int line) {
  const double d = parse_double(key, value, line);
  if (d < 0.0 || d != std::floor(d))
    throw ConfigError(key + ": expected a nonnegative integer (line " + std::to_string(line) +
                      ")");
  return static_cast<std::size_t>(d);
}

std::uint64_t parse_seed(const std::string& key, const std::string& value, int line) {
  try {
    std::size_t used = 0;
    const std::uint64_t out = std::stoull(value, &used);
    if (used == value.size()) return out;
  } catch (const std::exception&) {
  }
  throw ConfigError(key + ": expected an unsigned integer (line " + std::to_string(line) + ")");
}

bool parse_bool(const std::string& key, const std::string& value, int line) {
  if (value == "on" || value == "true" || value == "1") return true;
  if (value == "off" || value == "false" || value == "0") return false;
  throw ConfigError(key + ": expected on/off (line " + std::to_string(line) + ")");
}

std::vector<double> parse_list(const std::string& key, const std::string& value, int line) {
  std::vector<double> out;
  std::stringstream ss(value);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    if (item.empty())
      throw ConfigError(key + ": empty list entry (line " + std::to_string(line) + ")");
    out.push_back(parse_double(key, item, line));
  }
  if (out.empty()) throw ConfigError(key + ": empty list (line " + std::to_string(line) + ")");
  return out;
}

std::vector<Vec2> parse_points(const std::string& key, const std::string& value, int line) {
  std::vector<Vec2> out;
  std::stringstream ss(value);
  std::string pair;
  while (std::getline(ss, pair, ';')) {
    pair = trim(pair);
    if (pair.empty()) continue;
    std::stringstream ps(pair);
    double x = 0.0, y = 0.0;
    if (!(ps >> x >> y))
      throw ConfigError(key + ": expected 'x y' pairs separated by ';' (line " +
                        std::to_string(line) + ")");
    std::string rest;
    if (ps >> rest)
      throw ConfigError(key + ": trailing tokens in pair '" + pair + "' (line " +
                        std::to_string(line) + ")");
    out.push_back({x, y});
  }
  if (out.empty()) throw ConfigError(key + ": no points given (line " + std::to_string(line) + ")");
  return out;
}

}  // namespace

std::vector<double> ScenarioConfig::resolved_tau() const {
  if (tau_list.size() == num_targets) return tau_list;
  return std::vector<double>(num_targets, tau_list.front());
}

std::vector<double> ScenarioConfig::resolved_delta() const {
  return std::vector<double>(num_sensors, delta);
}

void ScenarioConfig::validate() const {
  if (!(workspace_side > 0.0)) throw ConfigError("workspace_side: must be > 0");
  if (num_sensors < 1) throw ConfigError("sensors: must be >= 1");
  if (num_targets < 1) throw ConfigError("landmarks: must be >= 1");
  try {
    sensor.validate();
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
  if (tau_list.size() != 1 && tau_list.size() != num_targets)
    throw ConfigError("tau: give one value or one per landmark");
  for (double t : tau_list)
    if (!(t >= 0.0) || !std::isfinite(t)) throw ConfigError("tau: entries must be >= 0");
  if (!(delta > 0.0)) throw ConfigError("delta: must be > 0");
  if (!(comm_radius > 0.0)) throw ConfigError("comm_radius: must be > 0");
  if (!(dropout >= 0.0 && dropout < 1.0)) throw ConfigError("dropout: must be in [0, 1)");
  if (!(alpha_a > 0.0)) throw ConfigError("alpha_a: must be > 0");
  if (!(alpha_b >= 0.0)) throw ConfigError("alpha_b: must be >= 0");
  if (!(early_stop_rel >= 0.0)) throw ConfigError("early_stop_rel: must be >= 0");
  if (landmark_source != "uniform" && landmark_source != "file")
    throw ConfigError("landmark_source: must be 'uniform' or 'file'");
  if (landmark_source == "file" && landmark_file.empty())
    throw ConfigError("landmark_file: required when landmark_source = file");
  if (output_dir.empty()) throw ConfigError("output_dir: must not be empty");
  if (sensor_start) {
    if (sensor_start->size() != num_sensors)
      throw ConfigError("sensor_start: expected one 'x y' pair per sensor");
    for (const Vec2& p : *sensor_start)
      if (!finite(p)) throw ConfigError("sensor_start: non-finite coordinate");
  }
}

ScenarioConfig parse_config(const std::string& text) {
  ScenarioConfig config;
  std::stringstream ss(text);
  std::string raw;
  int line = 0;
  while (std::getline(ss, raw)) {
    ++line;
    const auto comment = raw.find('#');
    if (comment != std::string::npos) raw.erase(comment);
    const std::string stripped = trim(raw);
    if (stripped.empty()) continue;

    const auto eq = stripped.find('=');
    if (eq == std::string::npos)
      throw ConfigError("expected 'key = value' (line " + std::to_string(line) + ")");
    const std::string key = trim(stripped.substr(0, eq));
    const std::string value = trim(stripped.substr(eq + 1));
    if (key.empty()) throw ConfigError("missing key (line " + std::to_string(line) + ")");
    if (value.empty())
      throw ConfigError(key + ": missing value (line " + std::to_string(line) + ")");

    if (key == "workspace_side") {
      config.workspace_side = parse_double(key, value, line);
    } else if (key == "sensors") {
      config.num_sensors = parse_count(key, value, line);
    } else if (key == "landmarks") {
      config.num_targets = parse_count(key, value, line);
    } else if (key == "c0") {
      config.sensor.c0 = parse_double(key, value, line);
    } else if (key == "c1") {
      config.sensor.c1 = parse_double(key, value, line);
    } else if (key == "rho") {
      config.sensor.rho = parse_double(key, value, line);
    } else if (key == "range_max") {
      if (value == "none")
        config.sensor.range_max.reset();
      else
        config.sensor.range_max = parse_double(key, value, line);
    } else if (key == "pos_epsilon") {
      config.sensor.pos_epsilon = parse_double(key, value, line);
    } else if (key == "tau") {
      config.tau_list = parse_list(key, value, line);
    } else if (key == "delta") {
      config.delta = parse_double(key, value, line);
    } else if (key == "comm_radius") {
      config.comm_radius = parse_double(key, value, line);
    } else if (key == "dropout") {
      config.dropout = parse_double(key, value, line);
    } else if (key == "alpha_a") {
      config.alpha_a = parse_double(key, value, line);
    } else if (key == "alpha_b") {
      config.alpha_b = parse_double(key, value, line);
    } else if (key == "k_max") {
      config.k_max = parse_count(key, value, line);
    } else if (key == "early_stop_rel") {
      config.early_stop_rel = parse_double(key, value, line);
    } else if (key == "t_max") {
      config.t_max = parse_count(key, value, line);
    } else if (key == "seed") {
      config.seed = parse_seed(key, value, line);
    } else if (key == "landmark_source") {
      config.landmark_source = value;
    } else if (key == "landmark_file") {
      config.landmark_file = value;
    } else if (key == "output_dir") {
      config.output_dir = value;
    } else if (key == "sensor_start") {
      config.sensor_start = parse_points(key, value, line);
    } else if (key == "inner_diagnostics") {
      config.inner_diagnostics = parse_bool(key, value, line);
    } else {
      throw ConfigError("unknown key '" + key + "' (line " + std::to_string(line) + ")");
    }
  }

  config.validate();
  return config;
}

ScenarioConfig load_config(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot open config file: " + path);
  std::stringstream buffer;
  buffer << in.rdbuf();
  return parse_config(buffer.str());
}

std::vector<Vec2> load_landmarks(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot open landmark file: " + path);
  std::vector<Vec2> points;
  std::string raw;
  int line = 0;
  while (std::getline(in, raw)) {
    ++line;
    const auto comment = raw.find('#');
    if (comment != std::string::npos) raw.erase(comment);
    const std::string stripped = trim(raw);
    if (stripped.empty()) continue;
    std::stringstream ps(stripped);
    double x = 0.0, y = 0.0;
    if (!(ps >> x >> y))
      throw ConfigError("landmark file: expected 'x y' (line " + std::to_string(line) + ")");
    points.push_back({x, y});
  }
  return points;
}

}  // namespace ascent
