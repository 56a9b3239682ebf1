#pragma once

#include <cstddef>
#include <span>
#include <utility>
#include <vector>

#include "ascent/rng.hpp"
#include "ascent/sensor_model.hpp"
#include "ascent/vec.hpp"

namespace ascent {

// Undirected communication graph over the sensor team. Self loops are not
// stored; every mixing neighborhood implicitly contains the node itself.
struct CommGraph {
  std::size_t n = 0;
  double comm_radius = 0.0;
  std::vector<std::pair<std::size_t, std::size_t>> edges;  // s < v, sorted
  std::vector<std::vector<std::size_t>> adjacency;         // sorted neighbor lists

  bool has_edge(std::size_t s, std::size_t v) const;
  std::size_t degree(std::size_t s) const { return adjacency[s].size(); }
};

CommGraph graph_from_edges(std::size_t n, std::vector<std::pair<std::size_t, std::size_t>> edges,
                           double comm_radius = 0.0);

// Disk graph: edge iff the pair is within comm_radius (closed ball).
CommGraph build_graph(std::span<const SensorPose> poses, double comm_radius);

// Symmetric doubly stochastic mixing weights with support exactly on the
// closed neighborhoods: 1/(1 + max degree) per edge, remainder on the
// diagonal. Positive entries are >= 1/n on any graph with <= n nodes.
struct WeightMatrix {
  std::size_t n = 0;
  std::vector<double> w;  // row-major n*n

  double at(std::size_t s, std::size_t v) const { return w[s * n + v]; }
  std::span<const double> row(std::size_t s) const { return {w.data() + s * n, n}; }
};

WeightMatrix metropolis_weights(const CommGraph& g);

struct ConnectivityReport {
  bool connected = false;
  std::vector<std::pair<std::size_t, std::size_t>> bridges;
};

ConnectivityReport check_connectivity(const CommGraph& g);

// Shrink proposed controls so no move can disconnect the network: any bridge
// that would stretch past comm_radius has both endpoint controls scaled by
// the largest common factor keeping it within comm_radius*(1 - margin
// fraction). Non-bridge links may drop as long as the post-move graph stays
// connected. Throws when the input graph is already disconnected.
std::vector<Vec2> connectivity_filter(std::span<const SensorPose> poses,
                                      std::span<const Vec2> proposed_controls,
                                      double comm_radius, double margin_fraction = 0.05);

// Per-round link failure: each edge independently removed with probability
// dropout_prob, drawn from the dedicated dropout stream.
CommGraph drop_edges(const CommGraph& g, RngStream& rng, double dropout_prob);

}  // namespace ascent
