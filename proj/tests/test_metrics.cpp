#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "ascent/metrics.hpp"
#include "ascent/mission.hpp"

using namespace ascent;

namespace {

std::string slurp(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  REQUIRE(in.good());
  std::stringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

std::size_t count_lines(const std::string& text) {
  std::size_t lines = 0;
  for (char c : text)
    if (c == '\n') ++lines;
  return lines;
}

struct SmallRun {
  ScenarioConfig config;
  MetricsHistory history;
};

SmallRun small_run() {
  SmallRun r;
  r.config.num_sensors = 2;
  r.config.num_targets = 3;
  r.config.workspace_side = 4.0;
  r.config.tau_list = {3.0};
  r.config.comm_radius = 3.0;
  r.config.t_max = 300;
  r.config.seed = 17;
  r.history = run(r.config);
  return r;
}

}  // namespace

TEST_CASE("metrics files follow the documented schema") {
  const SmallRun r = small_run();
  const auto dir = std::filesystem::temp_directory_path() / "ascent_metrics_schema";
  std::filesystem::remove_all(dir);
  emit_metrics(r.history, r.config, dir.string());

  const std::string eigs = slurp(dir / "eigs.csv");
  const std::string errors = slurp(dir / "errors.csv");
  const std::string violations = slurp(dir / "violations.csv");
  const std::string traj = slurp(dir / "trajectories.csv");

  CHECK(eigs.rfind("t,landmark,lambda_min\n", 0) == 0);
  CHECK(errors.rfind("t,landmark,error_m\n", 0) == 0);
  CHECK(violations.rfind("t,landmark,nonlinear_violation\n", 0) == 0);
  CHECK(traj.rfind("t,sensor,x,y,ux,uy\n", 0) == 0);

  const std::size_t rows = r.history.steps.size();
  CHECK(count_lines(eigs) == 1 + rows * 3);
  CHECK(count_lines(errors) == 1 + rows * 3);
  CHECK(count_lines(violations) == 1 + rows * 3);
  CHECK(count_lines(traj) == 1 + rows * 2);
  CHECK(eigs.find("\r") == std::string::npos);  // LF endings only
}

TEST_CASE("summary round-trips the configuration") {
  const SmallRun r = small_run();
  const auto dir = std::filesystem::temp_directory_path() / "ascent_metrics_summary";
  std::filesystem::remove_all(dir);
  emit_metrics(r.history, r.config, dir.string());

  const nlohmann::json summary = nlohmann::json::parse(slurp(dir / "summary.json"));
  CHECK(summary["format_version"] == 1);
  CHECK(summary["seed"] == 17);
  CHECK(summary["all_done"] == r.history.all_done);
  CHECK(summary["termination_t"] == r.history.termination_t);
  CHECK(summary["config"]["sensors"] == 2);
  CHECK(summary["config"]["landmarks"] == 3);
  CHECK(summary["config"]["workspace_side"] == 4.0);
  CHECK(summary["config"]["tau"] == std::vector<double>{3.0});
  CHECK(summary["config"]["range_max"].is_null());
  CHECK(summary["final"]["done_count"] == 3);
}

TEST_CASE("emission is byte-deterministic") {
  const SmallRun r = small_run();
  const auto dir1 = std::filesystem::temp_directory_path() / "ascent_metrics_det1";
  const auto dir2 = std::filesystem::temp_directory_path() / "ascent_metrics_det2";
  std::filesystem::remove_all(dir1);
  std::filesystem::remove_all(dir2);
  emit_metrics(r.history, r.config, dir1.string());
  emit_metrics(r.history, r.config, dir2.string());
  emit_plots(r.history, r.config, dir1.string());
  emit_plots(r.history, r.config, dir2.string());
  for (const char* name : {"eigs.csv", "errors.csv", "violations.csv", "trajectories.csv",
                           "summary.json", "eigs.svg", "errors.svg", "violations.svg",
                           "trajectories.svg"}) {
    CHECK(slurp(dir1 / name) == slurp(dir2 / name));
  }
}

TEST_CASE("plots are well-formed SVG with threshold lines") {
  const SmallRun r = small_run();
  const auto dir = std::filesystem::temp_directory_path() / "ascent_metrics_svg";
  std::filesystem::remove_all(dir);
  emit_plots(r.history, r.config, dir.string());

  for (const char* name : {"eigs.svg", "errors.svg", "violations.svg", "trajectories.svg"}) {
    const std::string svg = slurp(dir / name);
    CHECK(svg.rfind("<?xml", 0) == 0);
    CHECK(svg.find("<svg") != std::string::npos);
    CHECK(svg.substr(svg.size() - 7) == "</svg>\n");
  }
  // dashed tolerance line at y = tau
  const std::string eigs = slurp(dir / "eigs.svg");
  CHECK(eigs.find("stroke-dasharray") != std::string::npos);
  CHECK(eigs.find("class=\"threshold\"") != std::string::npos);
  CHECK(eigs.find("tau = 3") != std::string::npos);
  const std::string errors = slurp(dir / "errors.svg");
  CHECK(errors.find("class=\"threshold\"") != std::string::npos);
}

TEST_CASE("plots can be rebuilt from a metrics directory") {
  const SmallRun r = small_run();
  const auto dir = std::filesystem::temp_directory_path() / "ascent_metrics_rebuild";
  std::filesystem::remove_all(dir);
  emit_metrics(r.history, r.config, dir.string());
  std::filesystem::remove(dir / "eigs.svg");

  plots_from_dir(dir.string());
  const std::string svg = slurp(dir / "eigs.svg");
  CHECK(svg.find("class=\"threshold\"") != std::string::npos);
}

TEST_CASE("diagnostics stream lands in its own file when enabled") {
  SmallRun r;
  r.config.num_sensors = 2;
  r.config.num_targets = 2;
  r.config.workspace_side = 3.0;
  r.config.tau_list = {2.0};
  r.config.comm_radius = 3.0;
  r.config.t_max = 100;
  r.config.seed = 19;
  r.config.inner_diagnostics = true;
  r.history = run(r.config);
  REQUIRE_FALSE(r.history.inner.empty());

  const auto dir = std::filesystem::temp_directory_path() / "ascent_metrics_diag";
  std::filesystem::remove_all(dir);
  emit_metrics(r.history, r.config, dir.string());
  const std::string diag = slurp(dir / "diagnostics.csv");
  CHECK(diag.rfind("t,k,sensor,h_plus,beta,grad_norm,dist_to_mean,nu,delta_norm\n", 0) == 0);
  CHECK(count_lines(diag) == 1 + r.history.inner.size());
}
