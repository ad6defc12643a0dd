#include "wsn/arcs.hpp"

#include <algorithm>
#include <stdexcept>

#include "wsn/energy.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

namespace wsn {

namespace {

// Everything incident to one sensor, in the canonical order.
struct SensorRow {
  std::vector<std::vector<int>> covered;  // per phenomenon, demand points
  std::vector<int> neighbors;
  std::vector<int> sinks;
};

SensorRow sensor_row(const Instance& in, int i) {
  SensorRow row;
  const Point2D& s = in.sensors[i];
  row.covered.resize(in.phenomena.size());
  for (int j = 0; j < in.num_demand_points(); ++j) {
    const double d = distance(s, in.demand_points[j].position);
    for (const Phenomenon& ph : in.phenomena) {
      if (d <= ph.coverage_radius) row.covered[ph.id].push_back(j);
    }
  }
  for (int k = 0; k < in.num_sensors(); ++k) {
    if (k != i && distance(s, in.sensors[k]) <= in.comm_radius) row.neighbors.push_back(k);
  }
  for (int m = 0; m < in.num_sinks(); ++m) {
    if (distance(s, in.sinks[m]) <= in.comm_radius) row.sinks.push_back(m);
  }
  return row;
}

ArcSets assemble(const Instance& in, const std::vector<SensorRow>& rows) {
  ArcSets arcs;
  arcs.num_sensors = in.num_sensors();
  arcs.num_demand_points = in.num_demand_points();
  arcs.num_sinks = in.num_sinks();
  arcs.coverage.resize(in.phenomena.size());
  for (int i = 0; i < arcs.num_sensors; ++i) {
    const SensorRow& row = rows[i];
    for (std::size_t g = 0; g < row.covered.size(); ++g) {
      for (int j : row.covered[g]) arcs.coverage[g].push_back({i, j});
    }
    for (int k : row.neighbors) arcs.comm.emplace_back(i, k);
    for (int m : row.sinks) arcs.to_sink.emplace_back(i, m);
  }
  return arcs;
}

}  // namespace

ArcSets build_arcs(const Instance& in) {
  const int n = in.num_sensors();
  std::vector<SensorRow> rows(n);
#pragma omp parallel for schedule(dynamic, 4)
  for (int i = 0; i < n; ++i) rows[i] = sensor_row(in, i);
  return assemble(in, rows);
}

ArcSets build_arcs_serial(const Instance& in) {
  const int n = in.num_sensors();
  std::vector<SensorRow> rows;
  rows.reserve(n);
  for (int i = 0; i < n; ++i) rows.push_back(sensor_row(in, i));
  return assemble(in, rows);
}

void check_arcs_match(const Instance& in, const ArcSets& arcs) {
  if (arcs.num_sensors != in.num_sensors() || arcs.num_demand_points != in.num_demand_points() ||
      arcs.num_sinks != in.num_sinks() ||
      arcs.coverage.size() != in.phenomena.size()) {
    throw std::invalid_argument("arc sets were built for a different instance shape");
  }
  if (!(arcs == build_arcs_serial(in))) {
    throw std::invalid_argument("arc sets do not match the instance geometry");
  }
}

Topology build_topology(const Instance& in, const ArcSets& arcs) {
  check_arcs_match(in, arcs);
  const int S = in.num_sensors();
  const int G = in.num_phenomena();
  Topology topo;
  topo.num_sensors = S;
  topo.num_phenomena = G;

  // Merge A^s and A^m so each sensor's arcs are contiguous: neighbors by index,
  // then sinks by index.
  std::size_t c = 0;
  std::size_t m = 0;
  for (int i = 0; i < S; ++i) {
    for (; c < arcs.comm.size() && arcs.comm[c].first == i; ++c) {
      topo.route_arcs.push_back({i, arcs.comm[c].second});
    }
    for (; m < arcs.to_sink.size() && arcs.to_sink[m].first == i; ++m) {
      topo.route_arcs.push_back({i, sink_node(arcs.to_sink[m].second)});
    }
  }

  topo.out_arcs.assign(S, {});
  topo.in_arcs.assign(S, {});
  topo.transmit.resize(topo.route_arcs.size() * G);
  for (std::size_t a = 0; a < topo.route_arcs.size(); ++a) {
    const RouteArc& arc = topo.route_arcs[a];
    topo.out_arcs[arc.from].push_back(static_cast<int>(a));
    if (!is_sink_node(arc.to)) topo.in_arcs[arc.to].push_back(static_cast<int>(a));
    const Point2D& head = is_sink_node(arc.to) ? in.sinks[sink_of(arc.to)] : in.sensors[arc.to];
    const double d = distance(in.sensors[arc.from], head);
    for (int g = 0; g < G; ++g) {
      topo.transmit[a * G + g] =
          derive_energy_constants(in.device, in.phenomena[g], in.period_length_min, d).transmit;
    }
  }
  topo.receive.resize(G);
  for (int g = 0; g < G; ++g) {
    topo.receive[g] =
        derive_energy_constants(in.device, in.phenomena[g], in.period_length_min, 0.0).receive;
  }

  topo.coverers.assign(static_cast<std::size_t>(in.num_demand_points()) * G, {});
  topo.covered.assign(static_cast<std::size_t>(S) * G, {});
  topo.sources.assign(G, {});
  topo.is_source.assign(G, std::vector<char>(S, 0));
  for (int g = 0; g < G; ++g) {
    for (const CoverArc& arc : arcs.coverage[g]) {
      if (!in.demand_points[arc.demand_point].demands_phenomenon(g)) continue;
      topo.coverers[static_cast<std::size_t>(arc.demand_point) * G + g].push_back(arc.sensor);
      topo.covered[static_cast<std::size_t>(arc.sensor) * G + g].push_back(arc.demand_point);
      topo.is_source[g][arc.sensor] = 1;
    }
    for (int i = 0; i < S; ++i) {
      if (topo.is_source[g][i]) topo.sources[g].push_back(i);
    }
  }
  return topo;
}

}  // namespace wsn
