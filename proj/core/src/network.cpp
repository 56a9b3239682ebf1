#include "ascent/network.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace ascent {

namespace {

std::vector<std::vector<std::size_t>> adjacency_of(
    std::size_t n, const std::vector<std::pair<std::size_t, std::size_t>>& edges) {
  std::vector<std::vector<std::size_t>> adj(n);
  for (const auto& [s, v] : edges) {
    adj[s].push_back(v);
    adj[v].push_back(s);
  }
  for (auto& list : adj) std::sort(list.begin(), list.end());
  return adj;
}

bool connected_without(const CommGraph& g, std::size_t skip_edge) {
  if (g.n == 0) return true;
  std::vector<bool> seen(g.n, false);
  std::vector<std::size_t> stack{0};
  seen[0] = true;
  std::size_t count = 1;
  while (!stack.empty()) {
    const std::size_t s = stack.back();
    stack.pop_back();
    for (std::size_t v : g.adjacency[s]) {
      if (skip_edge != static_cast<std::size_t>(-1)) {
        const auto& e = g.edges[skip_edge];
        if ((e.first == s && e.second == v) || (e.first == v && e.second == s)) continue;
      }
      if (!seen[v]) {
        seen[v] = true;
        ++count;
        stack.push_back(v);
      }
    }
  }
  return count == g.n;
}

// Largest factor f in [0, 1] such that ||dr + f du|| <= limit; 0 when none.
double largest_feasible_scale(const Vec2& dr, const Vec2& du, double limit) {
  const double limit_sq = limit * limit;
  auto len_sq = [&](double f) {
    const Vec2 p = dr + f * du;
    return dot(p, p);
  };
  if (len_sq(1.0) <= limit_sq) return 1.0;
  const double a = dot(du, du);
  if (a <= 1e-30) return 0.0;
  const double b = 2.0 * dot(dr, du);
  const double c = dot(dr, dr) - limit_sq;
  const double disc = b * b - 4.0 * a * c;
  if (disc < 0.0) return 0.0;
  const double upper = (-b + std::sqrt(disc)) / (2.0 * a);
  const double f = std::clamp(upper, 0.0, 1.0);
  return len_sq(f) <= limit_sq * (1.0 + 1e-12) ? f : 0.0;
}

}  // namespace

bool CommGraph::has_edge(std::size_t s, std::size_t v) const {
  const auto& list = adjacency[s];
  return std::binary_search(list.begin(), list.end(), v);
}

CommGraph graph_from_edges(std::size_t n, std::vector<std::pair<std::size_t, std::size_t>> edges,
                           double comm_radius) {
  CommGraph g;
  g.n = n;
  g.comm_radius = comm_radius;
  for (auto& e : edges) {
    if (e.first == e.second) throw std::invalid_argument("graph_from_edges: self loop");
    if (e.first > e.second) std::swap(e.first, e.second);
    if (e.second >= n) throw std::invalid_argument("graph_from_edges: vertex out of range");
  }
  std::sort(edges.begin(), edges.end());
  edges.erase(std::unique(edges.begin(), edges.end()), edges.end());
  g.edges = std::move(edges);
  g.adjacency = adjacency_of(n, g.edges);
  return g;
}

CommGraph build_graph(std::span<const SensorPose> poses, double comm_radius) {
  if (!(comm_radius > 0.0)) throw std::invalid_argument("build_graph: comm_radius must be > 0");
  std::vector<std::pair<std::size_t, std::size_t>> edges;
  for (std::size_t s = 0; s < poses.size(); ++s)
    for (std::size_t v = s + 1; v < poses.size(); ++v)
      if (dist(poses[s].r, poses[v].r) <= comm_radius) edges.emplace_back(s, v);
  return graph_from_edges(poses.size(), std::move(edges), comm_radius);
}

WeightMatrix metropolis_weights(const CommGraph& g) {
  WeightMatrix w;
  w.n = g.n;
  w.w.assign(g.n * g.n, 0.0);
  for (const auto& [s, v] : g.edges) {
    const double weight = 1.0 / (1.0 + static_cast<double>(std::max(g.degree(s), g.degree(v))));
    w.w[s * g.n + v] = weight;
    w.w[v * g.n + s] = weight;
  }
  for (std::size_t s = 0; s < g.n; ++s) {
    double off = 0.0;
    for (std::size_t v = 0; v < g.n; ++v) off += w.w[s * g.n + v];
    w.w[s * g.n + s] = 1.0 - off;
  }
  return w;
}

ConnectivityReport check_connectivity(const CommGraph& g) {
  ConnectivityReport report;
  report.connected = connected_without(g, static_cast<std::size_t>(-1));
  if (!report.connected) return report;
  for (std::size_t e = 0; e < g.edges.size(); ++e)
    if (!connected_without(g, e)) report.bridges.push_back(g.edges[e]);
  return report;
}

std::vector<Vec2> connectivity_filter(std::span<const SensorPose> poses,
                                      std::span<const Vec2> proposed_controls,
                                      double comm_radius, double margin_fraction) {
  if (poses.size() != proposed_controls.size())
    throw std::invalid_argument("connectivity_filter: poses/controls size mismatch");
  const CommGraph graph = build_graph(poses, comm_radius);
  ConnectivityReport report = check_connectivity(graph);
  if (!report.connected)
    throw std::runtime_error("connectivity_filter: input graph is disconnected");

  const double limit = comm_radius * (1.0 - margin_fraction);
  std::vector<std::pair<std::size_t, std::size_t>> protect = report.bridges;

  for (;;) {
    std::vector<double> scale(poses.size(), 1.0);
    // Shrink both endpoints of any protected link that would stretch past the
    // communication radius. Scales only ever decrease, so a handful of passes
    // reaches a fixed point.
    for (int pass = 0; pass < 32; ++pass) {
      bool changed = false;
      for (const auto& [s, v] : protect) {
        const Vec2 dr = poses[s].r - poses[v].r;
        const Vec2 du = scale[s] * proposed_controls[s] - scale[v] * proposed_controls[v];
        if (norm(dr + du) <= comm_radius) continue;
        const double f = largest_feasible_scale(dr, du, limit);
        if (f < 1.0) {
          scale[s] *= f;
          scale[v] *= f;
          changed = true;
        }
      }
      if (!changed) break;
    }

    std::vector<Vec2> adjusted(poses.size());
    std::vector<SensorPose> moved(poses.size());
    for (std::size_t s = 0; s < poses.size(); ++s) {
      adjusted[s] = scale[s] * proposed_controls[s];
      moved[s] = SensorPose{poses[s].r + adjusted[s]};
    }
    const CommGraph after = build_graph(moved, comm_radius);
    if (check_connectivity(after).connected) return adjusted;

    // Simultaneous loss of several non-bridge links disconnected the graph:
    // protect the links that dropped and rescale.
    const std::size_t before = protect.size();
    for (const auto& e : graph.edges)
      if (!after.has_edge(e.first, e.second) &&
          std::find(protect.begin(), protect.end(), e) == protect.end())
        protect.push_back(e);
    if (protect.size() == before) {
      // Every current link already protected; zeroed controls keep the
      // original (connected) graph.
      return std::vector<Vec2>(poses.size(), Vec2{0.0, 0.0});
    }
    std::sort(protect.begin(), protect.end());
  }
}

CommGraph drop_edges(const CommGraph& g, RngStream& rng, double dropout_prob) {
  if (dropout_prob <= 0.0) return g;
  std::vector<std::pair<std::size_t, std::size_t>> kept;
  kept.reserve(g.edges.size());
  for (const auto& e : g.edges)
    if (!rng.bernoulli(dropout_prob)) kept.push_back(e);
  return graph_from_edges(g.n, std::move(kept), g.comm_radius);
}

}  // namespace ascent
