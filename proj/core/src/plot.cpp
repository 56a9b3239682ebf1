#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <limits>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "ascent/metrics.hpp"

namespace ascent {

namespace {

constexpr double kWidth = 800.0;
constexpr double kHeight = 500.0;
constexpr double kMarginLeft = 70.0;
constexpr double kMarginRight = 20.0;
constexpr double kMarginTop = 30.0;
constexpr double kMarginBottom = 50.0;

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.6g", v);
  return buf;
}

struct Axes {
  double x_min = 0.0, x_max = 1.0, y_min = 0.0, y_max = 1.0;

  double px(double x) const {
    return kMarginLeft + (x - x_min) / (x_max - x_min) * (kWidth - kMarginLeft - kMarginRight);
  }
  double py(double y) const {
    return kHeight - kMarginBottom -
           (y - y_min) / (y_max - y_min) * (kHeight - kMarginTop - kMarginBottom);
  }
};

class Svg {
 public:
  Svg(double width, double height) {
    body_ += "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
    body_ += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + fmt(width) +
             "\" height=\"" + fmt(height) + "\" viewBox=\"0 0 " + fmt(width) + " " +
             fmt(height) + "\">\n";
    body_ += "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  }

  void polyline(const std::vector<std::pair<double, double>>& pts, const std::string& stroke,
                double width, const std::string& extra = "") {
    if (pts.size() < 2) return;
    body_ += "<polyline fill=\"none\" stroke=\"" + stroke + "\" stroke-width=\"" + fmt(width) +
             "\" " + extra + " points=\"";
    for (const auto& [x, y] : pts) body_ += fmt(x) + "," + fmt(y) + " ";
    body_ += "\"/>\n";
  }

  void polygon(const std::vector<std::pair<double, double>>& pts, const std::string& fill) {
    if (pts.size() < 3) return;
    body_ += "<polygon fill=\"" + fill + "\" stroke=\"none\" points=\"";
    for (const auto& [x, y] : pts) body_ += fmt(x) + "," + fmt(y) + " ";
    body_ += "\"/>\n";
  }

  void line(double x1, double y1, double x2, double y2, const std::string& stroke, double width,
            const std::string& extra = "") {
    body_ += "<line x1=\"" + fmt(x1) + "\" y1=\"" + fmt(y1) + "\" x2=\"" + fmt(x2) +
             "\" y2=\"" + fmt(y2) + "\" stroke=\"" + stroke + "\" stroke-width=\"" +
             fmt(width) + "\" " + extra + "/>\n";
  }

  void circle(double cx, double cy, double r, const std::string& fill) {
    body_ += "<circle cx=\"" + fmt(cx) + "\" cy=\"" + fmt(cy) + "\" r=\"" + fmt(r) +
             "\" fill=\"" + fill + "\"/>\n";
  }

  void rect(double x, double y, double w, double h, const std::string& stroke) {
    body_ += "<rect x=\"" + fmt(x) + "\" y=\"" + fmt(y) + "\" width=\"" + fmt(w) +
             "\" height=\"" + fmt(h) + "\" fill=\"none\" stroke=\"" + stroke + "\"/>\n";
  }

  void text(double x, double y, const std::string& s, const std::string& anchor = "start",
            double size = 13.0) {
    body_ += "<text x=\"" + fmt(x) + "\" y=\"" + fmt(y) + "\" font-family=\"sans-serif\" " +
             "font-size=\"" + fmt(size) + "\" text-anchor=\"" + anchor + "\">" + s +
             "</text>\n";
  }

  std::string finish() { return body_ + "</svg>\n"; }

 private:
  std::string body_;
};

void write_file(const std::string& dir, const std::string& name, const std::string& body) {
  const std::filesystem::path path = std::filesystem::path(dir) / name;
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << body;
}

void draw_axes(Svg& svg, const Axes& axes, const std::string& x_label,
               const std::string& y_label) {
  svg.line(axes.px(axes.x_min), axes.py(axes.y_min), axes.px(axes.x_max), axes.py(axes.y_min),
           "black", 1.0);
  svg.line(axes.px(axes.x_min), axes.py(axes.y_min), axes.px(axes.x_min), axes.py(axes.y_max),
           "black", 1.0);
  for (int i = 0; i <= 5; ++i) {
    const double fx = axes.x_min + (axes.x_max - axes.x_min) * i / 5.0;
    const double fy = axes.y_min + (axes.y_max - axes.y_min) * i / 5.0;
    svg.text(axes.px(fx), kHeight - kMarginBottom + 18.0, fmt(fx), "middle", 11.0);
    svg.text(kMarginLeft - 8.0, axes.py(fy) + 4.0, fmt(fy), "end", 11.0);
    svg.line(axes.px(fx), axes.py(axes.y_min), axes.px(fx), axes.py(axes.y_min) + 4.0, "black",
             1.0);
    svg.line(axes.px(axes.x_min) - 4.0, axes.py(fy), axes.px(axes.x_min), axes.py(fy), "black",
             1.0);
  }
  svg.text(0.5 * kWidth, kHeight - 12.0, x_label, "middle");
  svg.text(16.0, kMarginTop - 10.0, y_label, "start");
}

struct BandSeries {
  std::vector<double> t, low, mid, high;
};

std::string band_plot(const BandSeries& series, double threshold, const std::string& y_label,
                      const std::string& threshold_label) {
  Axes axes;
  axes.x_max = std::max(1.0, series.t.empty() ? 1.0 : series.t.back());
  double top = threshold;
  for (double v : series.high) top = std::max(top, v);
  axes.y_max = top <= 0.0 ? 1.0 : 1.08 * top;

  Svg svg(kWidth, kHeight);
  std::vector<std::pair<double, double>> band;
  for (std::size_t k = 0; k < series.t.size(); ++k)
    band.emplace_back(axes.px(series.t[k]), axes.py(series.high[k]));
  for (std::size_t k = series.t.size(); k-- > 0;)
    band.emplace_back(axes.px(series.t[k]), axes.py(series.low[k]));
  svg.polygon(band, "#d9d9d9");

  std::vector<std::pair<double, double>> mean_line;
  for (std::size_t k = 0; k < series.t.size(); ++k)
    mean_line.emplace_back(axes.px(series.t[k]), axes.py(series.mid[k]));
  svg.polyline(mean_line, "black", 1.5);

  svg.line(axes.px(axes.x_min), axes.py(threshold), axes.px(axes.x_max), axes.py(threshold),
           "#c03030", 1.2, "stroke-dasharray=\"6,4\" class=\"threshold\"");
  svg.text(axes.px(axes.x_max), axes.py(threshold) - 6.0, threshold_label, "end", 11.0);
  draw_axes(svg, axes, "t", y_label);
  return svg.finish();
}

}  // namespace

void emit_plots(const MetricsHistory& history, const ScenarioConfig& config,
                const std::string& dir) {
  std::filesystem::create_directories(dir);
  const std::vector<double> tau = config.resolved_tau();
  const double tau_min = *std::min_element(tau.begin(), tau.end());
  const double accuracy = tau_min > 0.0 ? 3.0 / std::sqrt(tau_min) : 1.0;

  BandSeries eigs, errors;
  for (const StepMetrics& row : history.steps) {
    double lam_lo = std::numeric_limits<double>::infinity(), lam_hi = 0.0, lam_sum = 0.0;
    double err_lo = std::numeric_limits<double>::infinity(), err_hi = 0.0, err_sum = 0.0;
    for (const LandmarkMetric& lm : row.landmarks) {
      lam_lo = std::min(lam_lo, lm.lambda_min);
      lam_hi = std::max(lam_hi, lm.lambda_min);
      lam_sum += lm.lambda_min;
      err_lo = std::min(err_lo, lm.error_m);
      err_hi = std::max(err_hi, lm.error_m);
      err_sum += lm.error_m;
    }
    const double count = static_cast<double>(std::max<std::size_t>(1, row.landmarks.size()));
    eigs.t.push_back(static_cast<double>(row.t));
    eigs.low.push_back(lam_lo);
    eigs.mid.push_back(lam_sum / count);
    eigs.high.push_back(lam_hi);
    errors.t.push_back(static_cast<double>(row.t));
    errors.low.push_back(err_lo);
    errors.mid.push_back(err_sum / count);
    errors.high.push_back(err_hi);
  }
  write_file(dir, "eigs.svg",
             band_plot(eigs, tau_min, "min eigenvalue [1/m^2]", "tau = " + fmt(tau_min)));
  write_file(dir, "errors.svg",
             band_plot(errors, accuracy, "localization error [m]",
                       "accuracy = " + fmt(accuracy) + " m"));

  // Per-landmark violation traces.
  {
    Axes axes;
    axes.x_max = std::max(1.0, history.steps.empty()
                                   ? 1.0
                                   : static_cast<double>(history.steps.back().t));
    double top = 0.0;
    for (const StepMetrics& row : history.steps)
      for (const LandmarkMetric& lm : row.landmarks) top = std::max(top, lm.nonlinear_violation);
    axes.y_max = top <= 0.0 ? 1.0 : 1.08 * top;

    Svg svg(kWidth, kHeight);
    const std::size_t m = history.steps.empty() ? 0 : history.steps.front().landmarks.size();
    for (std::size_t i = 0; i < m; ++i) {
      std::vector<std::pair<double, double>> line;
      for (const StepMetrics& row : history.steps)
        line.emplace_back(axes.px(static_cast<double>(row.t)),
                          axes.py(row.landmarks[i].nonlinear_violation));
      svg.polyline(line, "#707070", 1.0);
    }
    draw_axes(svg, axes, "t", "nonlinear constraint violation");
    write_file(dir, "violations.svg", svg.finish());
  }

  // Trajectory snapshots: four panels at quarter points of the run.
  {
    const double side = config.workspace_side;
    Svg svg(kWidth, kWidth);
    const double panel = kWidth / 2.0;
    const double pad = 40.0;
    const std::size_t total = history.steps.size();
    for (int q = 0; q < 4; ++q) {
      const std::size_t upto =
          total == 0 ? 0 : std::max<std::size_t>(1, (total * (q + 1)) / 4);
      const double ox = (q % 2) * panel;
      const double oy = (q / 2) * panel;
      const double scale = (panel - 2.0 * pad) / side;
      svg.rect(ox + pad, oy + pad, side * scale, side * scale, "black");
      const std::size_t n = history.steps.empty() ? 0 : history.steps.front().sensors.size();
      for (std::size_t s = 0; s < n; ++s) {
        std::vector<std::pair<double, double>> path;
        for (std::size_t k = 0; k < upto; ++k) {
          const Vec2 p = history.steps[k].sensors[s].position;
          path.emplace_back(ox + pad + p[0] * scale, oy + pad + (side - p[1]) * scale);
        }
        svg.polyline(path, "#3060c0", 1.2);
        if (!path.empty()) svg.circle(path.back().first, path.back().second, 3.0, "#3060c0");
      }
      const std::size_t t_label = history.steps.empty() ? 0 : history.steps[upto - 1].t;
      svg.text(ox + pad, oy + pad - 8.0, "t = " + std::to_string(t_label), "start", 12.0);
    }
    write_file(dir, "trajectories.svg", svg.finish());
  }
}

void plots_from_dir(const std::string& metrics_dir) {
  const std::filesystem::path dir(metrics_dir);
  auto read_file = [&](const std::string& name) {
    std::ifstream in(dir / name, std::ios::binary);
    if (!in) throw std::runtime_error("cannot read " + (dir / name).string());
    std::stringstream buffer;
    buffer << in.rdbuf();
    return buffer.str();
  };

  const nlohmann::json summary = nlohmann::json::parse(read_file("summary.json"));
  ScenarioConfig config;
  config.workspace_side = summary["config"]["workspace_side"].get<double>();
  config.num_sensors = summary["config"]["sensors"].get<std::size_t>();
  config.num_targets = summary["config"]["landmarks"].get<std::size_t>();
  config.tau_list = summary["config"]["tau"].get<std::vector<double>>();

  // Rows arrive grouped by t in emission order; rebuild the step records.
  MetricsHistory history;
  auto for_each_row = [](const std::string& csv, auto&& fn) {
    std::stringstream ss(csv);
    std::string line;
    std::getline(ss, line);  // header
    while (std::getline(ss, line)) {
      if (line.empty()) continue;
      std::vector<std::string> cells;
      std::stringstream ls(line);
      std::string cell;
      while (std::getline(ls, cell, ',')) cells.push_back(cell);
      fn(cells);
    }
  };

  auto step_index = [&](std::size_t t) -> StepMetrics& {
    for (StepMetrics& row : history.steps)
      if (row.t == t) return row;
    history.steps.push_back({});
    history.steps.back().t = t;
    return history.steps.back();
  };

  for_each_row(read_file("eigs.csv"), [&](const std::vector<std::string>& c) {
    StepMetrics& row = step_index(std::stoul(c[0]));
    const std::size_t i = std::stoul(c[1]);
    if (row.landmarks.size() <= i) row.landmarks.resize(i + 1);
    row.landmarks[i].lambda_min = std::stod(c[2]);
  });
  for_each_row(read_file("errors.csv"), [&](const std::vector<std::string>& c) {
    StepMetrics& row = step_index(std::stoul(c[0]));
    const std::size_t i = std::stoul(c[1]);
    if (row.landmarks.size() <= i) row.landmarks.resize(i + 1);
    row.landmarks[i].error_m = std::stod(c[2]);
  });
  for_each_row(read_file("violations.csv"), [&](const std::vector<std::string>& c) {
    StepMetrics& row = step_index(std::stoul(c[0]));
    const std::size_t i = std::stoul(c[1]);
    if (row.landmarks.size() <= i) row.landmarks.resize(i + 1);
    row.landmarks[i].nonlinear_violation = std::stod(c[2]);
  });
  for_each_row(read_file("trajectories.csv"), [&](const std::vector<std::string>& c) {
    StepMetrics& row = step_index(std::stoul(c[0]));
    const std::size_t s = std::stoul(c[1]);
    if (row.sensors.size() <= s) row.sensors.resize(s + 1);
    row.sensors[s].position = {std::stod(c[2]), std::stod(c[3])};
    row.sensors[s].control = {std::stod(c[4]), std::stod(c[5])};
  });

  std::sort(history.steps.begin(), history.steps.end(),
            [](const StepMetrics& a, const StepMetrics& b) { return a.t < b.t; });
  if (!history.steps.empty()) history.termination_t = history.steps.back().t;
  emit_plots(history, config, metrics_dir);
}

}  // namespace ascent
