#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "ascent/config.hpp"
#include "ascent/metrics.hpp"
#include "ascent/mission.hpp"
#include "ascent/verify.hpp"
#include "ascent/worker_pool.hpp"

namespace {

int log_level() {
  const char* env = std::getenv("ASCENT_LOG");
  if (!env) return 0;
  const std::string value(env);
  if (value == "debug") return 2;
  if (value == "info") return 1;
  return 0;
}

int cmd_run(const std::string& config_path, unsigned workers) {
  const ascent::ScenarioConfig config = ascent::load_config(config_path);
  const ascent::WorkerPool pool(workers);
  const int verbosity = log_level();

  ascent::StepCallback progress;
  if (verbosity >= 2) {
    progress = [](const ascent::WorldState& world, const ascent::MetricsHistory&) {
      std::size_t done = 0;
      for (bool d : world.done) done += d ? 1 : 0;
      std::cerr << "t=" << world.t << " done=" << done << "/" << world.done.size() << "\n";
    };
  }

  const ascent::MetricsHistory history = ascent::run(config, &pool, progress);
  ascent::emit_metrics(history, config, config.output_dir);
  ascent::emit_plots(history, config, config.output_dir);

  if (verbosity >= 1) std::cerr << "metrics written to " << config.output_dir << "\n";
  if (history.timed_out) {
    std::cout << "timeout: t_max=" << config.t_max
              << " reached before all landmarks cleared tolerance\n";
    return 1;
  }
  std::cout << "done: all landmarks cleared tolerance at t=" << history.termination_t << "\n";
  return 0;
}

int cmd_verify(const std::string& level, const std::string& json_path) {
  const ascent::VerifyReport report = ascent::run_verify(
      level == "full" ? ascent::VerifyLevel::full : ascent::VerifyLevel::fast);
  for (const ascent::CheckResult& c : report.checks)
    std::cout << (c.passed ? "[PASS] " : "[FAIL] ") << c.name << " (" << c.detail << ")\n";

  const std::string json = ascent::report_json(report);
  if (json_path.empty()) {
    std::cout << json;
  } else {
    std::ofstream out(json_path, std::ios::binary);
    out << json;
  }
  return report.all_passed() ? 0 : 1;
}

int cmd_plot(const std::string& metrics_dir) {
  if (!std::filesystem::is_directory(metrics_dir)) {
    std::cerr << "not a metrics directory: " << metrics_dir << "\n";
    return 2;
  }
  ascent::plots_from_dir(metrics_dir);
  std::cout << "plots written to " << metrics_dir << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"ascent: concurrent distributed estimation and sensor planning"};
  app.require_subcommand(1);

  std::string config_path;
  unsigned workers = 1;
  CLI::App* run = app.add_subcommand("run", "run a scenario and emit metrics + plots");
  run->add_option("config", config_path, "scenario config file")->required();
  run->add_option("--workers", workers, "worker thread count (output is identical for any value)");

  std::string level = "fast";
  std::string json_path;
  CLI::App* verify = app.add_subcommand("verify", "run the oracle check suite");
  verify->add_option("--level", level, "fast|full")
      ->check(CLI::IsMember({"fast", "full"}));
  verify->add_option("--json", json_path, "also write the JSON report to this file");

  std::string metrics_dir;
  CLI::App* plot = app.add_subcommand("plot", "regenerate SVG plots from a metrics directory");
  plot->add_option("dir", metrics_dir, "metrics directory written by `run`")->required();

  try {
    app.parse(argc, argv);
    if (run->parsed()) return cmd_run(config_path, workers);
    if (verify->parsed()) return cmd_verify(level, json_path);
    if (plot->parsed()) return cmd_plot(metrics_dir);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  } catch (const ascent::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 2;
}
