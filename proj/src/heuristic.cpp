#include <chrono>
#include <cmath>
#include <limits>
#include <optional>
#include <queue>

#include "plan.hpp"
#include "wsn/solve.hpp"

namespace wsn {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

struct Route {
  std::vector<int> arcs;  // source to sink
  double energy = 0.0;    // total energy added across all sensors on the path
  double score = 0.0;     // the same, each share scaled by its sensor's scarcity
};

class Greedy {
 public:
  Greedy(const Instance& in, const Topology& topo, const ModelOptions& options)
      : in_(in),
        topo_(topo),
        S_(in.num_sensors()),
        T_(in.periods),
        G_(in.num_phenomena()),
        multiplier_(options.fixed_energy_multiplier(G_)),
        plan_(S_, T_, G_),
        residual_(S_, in.device.battery_capacity),
        active_now_(S_, 0),
        active_prev_(S_, 0) {}

  detail::Plan run() {
    for (int t = 0; t < T_; ++t) {
      std::fill(active_now_.begin(), active_now_.end(), 0);
      for (int g = 0; g < G_; ++g) cover(t, g);
      for (int i = 0; i < S_; ++i) plan_.active[static_cast<std::size_t>(i) * T_ + t] = active_now_[i];
      active_prev_ = active_now_;
    }
    return std::move(plan_);
  }

 private:
  // Energy to switch sensor i on for the current period, 0 if already on.
  double activation_cost(int i) const {
    if (active_now_[i]) return 0.0;
    const DeviceProfile& dev = in_.device;
    return multiplier_ * (dev.maintenance_energy + (active_prev_[i] ? 0.0 : dev.activation_energy));
  }

  // Energy drawn from sensor i, weighted by how depleted its battery is.
  double scarce(int i, double energy) const {
    if (energy == 0.0) return 0.0;
    return energy * in_.device.battery_capacity / residual_[i];
  }

  // Cheapest path from `source` to any sink for phenomenon g, with every
  // sensor on it able to pay its share from its residual battery. Path cost
  // is the scarcity-weighted energy.
  std::optional<Route> cheapest_route(int source, int g) const {
    std::vector<double> dist(S_, kInf);
    std::vector<int> parent(S_, -1);
    std::vector<char> done(S_, 0);
    using Item = std::pair<double, int>;
    std::priority_queue<Item, std::vector<Item>, std::greater<>> queue;
    dist[source] = scarce(source, activation_cost(source));
    queue.push({dist[source], source});
    double best = kInf;
    int best_arc = -1;
    const double er = topo_.receive[g];
    while (!queue.empty()) {
      const auto [d, u] = queue.top();
      queue.pop();
      if (done[u] || d > dist[u]) continue;
      done[u] = 1;
      if (d >= best) break;
      const double upkeep = activation_cost(u) + (u == source ? 0.0 : er);
      for (int a : topo_.out_arcs[u]) {
        const RouteArc& arc = topo_.route_arcs[a];
        const double et = topo_.arc_transmit(a, g);
        if (upkeep + et > residual_[u]) continue;
        if (is_sink_node(arc.to)) {
          if (d + scarce(u, et) < best) {
            best = d + scarce(u, et);
            best_arc = a;
          }
          continue;
        }
        const int v = arc.to;
        if (v == source || done[v]) continue;
        const double nd = d + scarce(u, et) + scarce(v, er + activation_cost(v));
        if (nd < dist[v]) {
          dist[v] = nd;
          parent[v] = a;
          queue.push({nd, v});
        }
      }
    }
    if (best_arc < 0) return std::nullopt;
    Route route;
    route.score = best;
    route.energy = activation_cost(source);
    for (int a = best_arc;;) {
      route.arcs.push_back(a);
      const RouteArc& arc = topo_.route_arcs[a];
      route.energy += topo_.arc_transmit(a, g);
      if (!is_sink_node(arc.to)) route.energy += er + activation_cost(arc.to);
      if (arc.from == source) break;
      a = parent[arc.from];
    }
    std::reverse(route.arcs.begin(), route.arcs.end());
    return route;
  }

  void commit(int t, int g, int source, const Route& route) {
    const double er = topo_.receive[g];
    auto switch_on = [&](int i) {
      residual_[i] -= activation_cost(i);
      active_now_[i] = 1;
    };
    switch_on(source);
    for (int a : route.arcs) {
      const RouteArc& arc = topo_.route_arcs[a];
      residual_[arc.from] -= topo_.arc_transmit(a, g);
      if (!is_sink_node(arc.to)) {
        switch_on(arc.to);
        residual_[arc.to] -= er;
      }
    }
    const std::size_t c = plan_.commodity(t, g, source);
    plan_.sensing[c] = 1;
    plan_.routes[c] = route.arcs;
  }

  void cover(int t, int g) {
    const int D = in_.num_demand_points();
    std::vector<char> open(D, 0);
    for (int j = 0; j < D; ++j) open[j] = in_.demand_points[j].demands_phenomenon(g) ? 1 : 0;
    std::vector<char> sensing(S_, 0);

    for (;;) {
      int pick = -1;
      Route pick_route;
      double pick_weight = kInf;
      for (int i : topo_.sources[g]) {
        if (sensing[i]) continue;
        int fresh = 0;
        double at_stake = 0.0;
        for (int j : topo_.covered[static_cast<std::size_t>(i) * G_ + g]) {
          if (open[j]) {
            ++fresh;
            at_stake += in_.uncovered_penalty(j, g);
          }
        }
        if (fresh == 0) continue;
        const auto route = cheapest_route(i, g);
        if (!route) continue;
        const double cost = route->energy + in_.activation_penalty(i, g);
        if (!(cost < at_stake)) continue;
        const double weight = (route->score + in_.activation_penalty(i, g)) / fresh;
        if (pick < 0 || better(weight, i, pick_weight, pick)) {
          pick = i;
          pick_weight = weight;
          pick_route = *route;
        }
      }
      if (pick < 0) break;
      sensing[pick] = 1;
      commit(t, g, pick, pick_route);
      for (int j : topo_.covered[static_cast<std::size_t>(pick) * G_ + g]) open[j] = 0;
    }
  }

  // Lower weight wins; then sensors already on, more residual battery, and
  // lower index.
  bool better(double weight, int i, double best_weight, int best) const {
    const double tol = 1e-12 * std::max(std::abs(weight), std::abs(best_weight));
    if (weight < best_weight - tol) return true;
    if (weight > best_weight + tol) return false;
    if (active_now_[i] != active_now_[best]) return active_now_[i] > active_now_[best];
    if (residual_[i] != residual_[best]) return residual_[i] > residual_[best];
    return i < best;
  }

  const Instance& in_;
  const Topology& topo_;
  int S_, T_, G_;
  double multiplier_;
  detail::Plan plan_;
  std::vector<double> residual_;
  std::vector<char> active_now_;
  std::vector<char> active_prev_;
};

}  // namespace

Solution solve_heuristic(const Instance& instance, const ArcSets& arcs, const SolveConfig& config) {
  const auto start = std::chrono::steady_clock::now();
  validate_instance(instance);
  const Topology topo = build_topology(instance, arcs);
  const detail::Plan plan = Greedy(instance, topo, config.model).run();
  Solution sol = detail::plan_to_solution(instance, topo, plan, config.model, Provenance::kHeuristic);
  sol.wall_time_s = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return sol;
}

}  // namespace wsn
