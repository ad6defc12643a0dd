#pragma once

#include <utility>
#include <vector>

#include "wsn/instance.hpp"

namespace wsn {

// Routing nodes: sensors are 0..S-1, sink m is encoded as -1 - m.
constexpr int sink_node(int m) { return -1 - m; }
constexpr bool is_sink_node(int node) { return node < 0; }
constexpr int sink_of(int node) { return -1 - node; }

struct CoverArc {
  int sensor = 0;
  int demand_point = 0;
  friend bool operator==(const CoverArc&, const CoverArc&) = default;
  friend auto operator<=>(const CoverArc&, const CoverArc&) = default;
};

struct RouteArc {
  int from = 0;  // always a sensor
  int to = 0;    // sensor or sink_node(m)
  friend bool operator==(const RouteArc&, const RouteArc&) = default;
};

// A^d_g per phenomenon, A^s, A^m. Every list is sorted by (tail, head).
struct ArcSets {
  int num_sensors = 0;
  int num_demand_points = 0;
  int num_sinks = 0;
  std::vector<std::vector<CoverArc>> coverage;
  std::vector<std::pair<int, int>> comm;     // (sensor, sensor), i != j
  std::vector<std::pair<int, int>> to_sink;  // (sensor, sink)

  friend bool operator==(const ArcSets&, const ArcSets&) = default;
};

// Membership is distance <= radius. Rows are computed in parallel with
// OpenMP when available.
ArcSets build_arcs(const Instance& instance);

// Single-threaded reference of build_arcs, kept for tests and benchmarks.
ArcSets build_arcs_serial(const Instance& instance);

// Derived adjacency shared by the model builder and the solvers.
struct Topology {
  int num_sensors = 0;
  int num_phenomena = 0;
  // A^s followed by A^m, ordered by (from, encoded to) with sensors first.
  std::vector<RouteArc> route_arcs;
  std::vector<std::vector<int>> out_arcs;  // per sensor, indices into route_arcs
  std::vector<std::vector<int>> in_arcs;   // per sensor
  // transmit[a * G + g] = ET for route arc a and phenomenon g.
  std::vector<double> transmit;
  std::vector<double> receive;  // ER per phenomenon
  // coverers[j * G + g]: sensors with a coverage arc to j for g; empty when
  // j does not demand g.
  std::vector<std::vector<int>> coverers;
  // covered[i * G + g]: demanded points sensor i can cover for g.
  std::vector<std::vector<int>> covered;
  // sources[g]: sensors with at least one coverage arc to a point demanding g.
  std::vector<std::vector<int>> sources;
  std::vector<std::vector<char>> is_source;  // [g][i]

  double arc_transmit(int a, int g) const {
    return transmit[static_cast<std::size_t>(a) * num_phenomena + g];
  }
};

// Throws std::invalid_argument when `arcs` was not derived from `instance`.
void check_arcs_match(const Instance& instance, const ArcSets& arcs);

Topology build_topology(const Instance& instance, const ArcSets& arcs);

}  // namespace wsn
