#include "plan.hpp"

#include <algorithm>
#include <cmath>

namespace wsn::detail {

double fixed_energy(const Instance& in, const std::vector<char>& on, double multiplier) {
  double energy = 0.0;
  char prev = 0;
  for (char y : on) {
    if (y) energy += in.device.maintenance_energy + (prev ? 0.0 : in.device.activation_energy);
    prev = y;
  }
  return multiplier * energy;
}

Solution plan_to_solution(const Instance& in, const Topology& topo, const Plan& plan,
                          const ModelOptions& options, Provenance provenance) {
  const int S = plan.S, T = plan.T, G = plan.G;
  const int D = in.num_demand_points();
  Solution sol;
  sol.provenance = provenance;
  std::vector<double> energy(S, 0.0);
  const double multiplier = options.fixed_energy_multiplier(G);

  for (int i = 0; i < S; ++i) {
    std::vector<char> on(T);
    for (int t = 0; t < T; ++t) {
      on[t] = plan.active[static_cast<std::size_t>(i) * T + t];
      if (on[t]) sol.set(VarRef::y(i, t), 1.0);
      if (on[t] && (t == 0 || !plan.active[static_cast<std::size_t>(i) * T + t - 1])) {
        sol.set(VarRef::w(i, t), 1.0);
      }
    }
    energy[i] += fixed_energy(in, on, multiplier);
  }

  for (int t = 0; t < T; ++t) {
    for (int g = 0; g < G; ++g) {
      std::vector<char> covered(D, 0);
      for (int l = 0; l < S; ++l) {
        const std::size_t c = plan.commodity(t, g, l);
        if (!plan.sensing[c]) continue;
        sol.set(VarRef::r(l, t, g), 1.0);
        for (int j : topo.covered[static_cast<std::size_t>(l) * G + g]) {
          sol.set(VarRef::x(l, j, t, g), 1.0);
          covered[j] = 1;
        }
        for (int a : plan.routes[c]) {
          const RouteArc& arc = topo.route_arcs[a];
          sol.set(VarRef::z(l, arc.from, arc.to, t, g), 1.0);
          energy[arc.from] += topo.arc_transmit(a, g);
          if (!is_sink_node(arc.to)) energy[arc.to] += topo.receive[g];
        }
      }
      for (int j = 0; j < D; ++j) {
        if (in.demand_points[j].demands_phenomenon(g) && !covered[j]) sol.set(VarRef::h(j, t, g), 1.0);
      }
    }
  }

  const double cap = in.device.battery_capacity;
  for (int i = 0; i < S; ++i) {
    double e = energy[i];
    // Absorb summation-order rounding against a budget that was respected.
    if (e > cap && e - cap <= 1e-9 * std::max(1.0, cap)) e = cap;
    sol.set(VarRef::e(i), e);
  }
  return sol;
}

}  // namespace wsn::detail
