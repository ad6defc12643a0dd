#pragma once

// Compact decision record shared by the exact and heuristic solvers.

#include <vector>

#include "wsn/arcs.hpp"
#include "wsn/instance.hpp"
#include "wsn/model.hpp"
#include "wsn/solution.hpp"

namespace wsn::detail {

struct Plan {
  int S = 0, T = 0, G = 0;
  std::vector<char> sensing;             // r, indexed commodity(t, g, l)
  std::vector<std::vector<int>> routes;  // route-arc indices per commodity
  std::vector<char> active;              // y, indexed i * T + t

  Plan(int sensors, int periods, int phenomena)
      : S(sensors),
        T(periods),
        G(phenomena),
        sensing(static_cast<std::size_t>(sensors) * periods * phenomena, 0),
        routes(sensing.size()),
        active(static_cast<std::size_t>(sensors) * periods, 0) {}

  std::size_t commodity(int t, int g, int l) const {
    return (static_cast<std::size_t>(t) * G + g) * S + l;
  }
};

// Fixed energy of one sensor over the horizon for activity pattern `on`
// (length T): EM per active period, EA per off->on transition.
double fixed_energy(const Instance& in, const std::vector<char>& on, double multiplier);

// Expands the plan into a full assignment: x on every demanded point a
// sensing sensor reaches, h where nothing covers, w on off->on transitions,
// e equal to the battery-row left-hand side.
Solution plan_to_solution(const Instance& in, const Topology& topo, const Plan& plan,
                          const ModelOptions& options, Provenance provenance);

}  // namespace wsn::detail
