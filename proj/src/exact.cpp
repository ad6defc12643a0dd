#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>

#include "plan.hpp"
#include "wsn/solve.hpp"
#include "wsn/validate.hpp"

namespace wsn {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

struct Commodity {
  int t, g, l;
};

class BranchAndBound {
 public:
  BranchAndBound(const Instance& in, const Topology& topo, const SolveConfig& config)
      : in_(in),
        topo_(topo),
        config_(config),
        S_(in.num_sensors()),
        D_(in.num_demand_points()),
        T_(in.periods),
        G_(in.num_phenomena()),
        multiplier_(config.model.fixed_energy_multiplier(G_)),
        deadline_(std::chrono::steady_clock::now() +
                  std::chrono::duration_cast<std::chrono::steady_clock::duration>(
                      std::chrono::duration<double>(config.time_limit_s))),
        sensing_(static_cast<std::size_t>(S_) * T_ * G_, 0),
        routes_(sensing_.size()),
        need_(static_cast<std::size_t>(S_) * T_, 0),
        comm_(S_, 0.0),
        pending_(S_, 0.0),
        cover_count_(static_cast<std::size_t>(D_) * T_ * G_, 0),
        min_et_(static_cast<std::size_t>(S_) * G_, kInf),
        position_(sensing_.size(), -1) {
    for (int i = 0; i < S_; ++i) {
      for (int g = 0; g < G_; ++g) {
        for (int a : topo_.out_arcs[i]) {
          min_et_[i * G_ + g] = std::min(min_et_[i * G_ + g], topo_.arc_transmit(a, g));
        }
      }
    }
    for (int t = 0; t < T_; ++t) {
      for (int g = 0; g < G_; ++g) {
        for (int l : topo_.sources[g]) {
          position_[index(t, g, l)] = static_cast<int>(order_.size());
          order_.push_back({t, g, l});
        }
      }
    }
  }

  void seed_incumbent(double objective) { best_ = objective; }

  // Returns true when the search space was exhausted.
  bool run() {
    branch_sensing(0);
    return !aborted_;
  }

  bool improved() const { return improved_; }
  const detail::Plan& best_plan() const { return best_plan_; }
  long long nodes() const { return nodes_; }

 private:
  std::size_t index(int t, int g, int l) const { return (static_cast<std::size_t>(t) * G_ + g) * S_ + l; }
  double met(int i, int g) const { return min_et_[static_cast<std::size_t>(i) * G_ + g]; }

  bool tick() {
    ++nodes_;
    if (nodes_ >= config_.node_limit) aborted_ = true;
    if ((nodes_ & 1023) == 0 && std::chrono::steady_clock::now() >= deadline_) aborted_ = true;
    return !aborted_;
  }

  bool prunes(double bound) const {
    if (!std::isfinite(best_)) return !std::isfinite(bound);
    const double tol = std::max(config_.optimality_gap * std::abs(best_), 1e-12 * std::max(1.0, std::abs(best_)));
    return bound >= best_ - tol;
  }

  // Cheapest EM/EA schedule covering the needed periods of sensor i; idle
  // gaps stay on when that is strictly cheaper than switching off and on.
  double fixed_cost(int i, std::vector<char>* pattern = nullptr) const {
    const DeviceProfile& dev = in_.device;
    double cost = 0.0;
    int last = -1;
    for (int t = 0; t < T_; ++t) {
      if (!need_[static_cast<std::size_t>(i) * T_ + t]) continue;
      cost += dev.maintenance_energy;
      const int gap = last < 0 ? -1 : t - last - 1;
      if (gap < 0) {
        cost += dev.activation_energy;
      } else if (gap > 0) {
        const bool bridge = gap * dev.maintenance_energy < dev.activation_energy;
        cost += bridge ? gap * dev.maintenance_energy : dev.activation_energy;
        if (pattern && bridge) {
          for (int k = last + 1; k < t; ++k) (*pattern)[k] = 1;
        }
      }
      if (pattern) (*pattern)[t] = 1;
      last = t;
    }
    return multiplier_ * cost;
  }

  // Energy lower bound for sensor i given everything committed so far.
  double energy_bound(int i) const { return fixed_cost(i) + comm_[i] + pending_[i]; }

  bool batteries_ok(int a, int b = -1) const {
    const double cap = in_.device.battery_capacity + 1e-9;
    if (energy_bound(a) > cap) return false;
    return b < 0 || energy_bound(b) <= cap;
  }

  void set_sensing(const Commodity& c, int delta) {
    sensing_[index(c.t, c.g, c.l)] = delta > 0 ? 1 : 0;
    need_[static_cast<std::size_t>(c.l) * T_ + c.t] += delta;
    pending_[c.l] += delta * met(c.l, c.g);
    for (int j : topo_.covered[static_cast<std::size_t>(c.l) * G_ + c.g]) {
      cover_count_[(static_cast<std::size_t>(j) * T_ + c.t) * G_ + c.g] += delta;
    }
  }

  // Bound while sensing decisions order_[0..k) are fixed.
  double sensing_bound(int k) const {
    double bound = 0.0;
    for (int i = 0; i < S_; ++i) bound += energy_bound(i);
    for (int p = 0; p < k; ++p) {
      const Commodity& c = order_[p];
      if (sensing_[index(c.t, c.g, c.l)]) bound += in_.activation_penalty(c.l, c.g);
    }
    for (int t = 0; t < T_; ++t) {
      for (int g = 0; g < G_; ++g) {
        double open_penalty = 0.0;
        double cheapest_cover = kInf;
        for (int j = 0; j < D_; ++j) {
          if (!in_.demand_points[j].demands_phenomenon(g)) continue;
          if (cover_count_[(static_cast<std::size_t>(j) * T_ + t) * G_ + g] > 0) continue;
          bool coverable = false;
          for (int i : topo_.coverers[static_cast<std::size_t>(j) * G_ + g]) {
            if (position_[index(t, g, i)] >= k) {
              coverable = true;
              cheapest_cover = std::min(cheapest_cover, in_.activation_penalty(i, g) + met(i, g));
            }
          }
          if (coverable) {
            open_penalty += in_.uncovered_penalty(j, g);
          } else {
            bound += in_.uncovered_penalty(j, g);
          }
        }
        // One undecided sensor covering some of these points, or every one
        // of them paying its penalty: whichever is cheaper.
        if (open_penalty > 0.0) bound += std::min(open_penalty, cheapest_cover);
      }
    }
    return bound;
  }

  void branch_sensing(int k) {
    if (!tick()) return;
    if (k == static_cast<int>(order_.size())) {
      start_routing();
      return;
    }
    const Commodity c = order_[k];
    for (int value : {1, 0}) {
      if (aborted_) return;
      if (value == 1) {
        if (!std::isfinite(met(c.l, c.g))) continue;
        set_sensing(c, +1);
        if (batteries_ok(c.l) && !prunes(sensing_bound(k + 1))) branch_sensing(k + 1);
        set_sensing(c, -1);
      } else {
        if (!prunes(sensing_bound(k + 1))) branch_sensing(k + 1);
      }
    }
  }

  void start_routing() {
    active_.clear();
    for (const Commodity& c : order_) {
      if (sensing_[index(c.t, c.g, c.l)]) active_.push_back(c);
    }
    fixed_penalty_ = 0.0;
    for (const Commodity& c : active_) fixed_penalty_ += in_.activation_penalty(c.l, c.g);
    for (int t = 0; t < T_; ++t) {
      for (int g = 0; g < G_; ++g) {
        for (int j = 0; j < D_; ++j) {
          if (in_.demand_points[j].demands_phenomenon(g) &&
              cover_count_[(static_cast<std::size_t>(j) * T_ + t) * G_ + g] == 0) {
            fixed_penalty_ += in_.uncovered_penalty(j, g);
          }
        }
      }
    }
    visited_.assign(S_, 0);
    begin_commodity(0);
  }

  void begin_commodity(std::size_t ci) {
    if (ci == active_.size()) {
      leaf();
      return;
    }
    const Commodity& c = active_[ci];
    // Its first hop is now being decided; the pending bound moves to the frontier.
    pending_[c.l] -= met(c.l, c.g);
    std::fill(visited_.begin(), visited_.end(), 0);
    visited_[c.l] = 1;
    extend(ci, c.l);
    pending_[c.l] += met(c.l, c.g);
  }

  double routing_bound(int frontier, int g) const {
    double bound = fixed_penalty_;
    for (int i = 0; i < S_; ++i) bound += energy_bound(i);
    if (frontier >= 0) bound += met(frontier, g);
    return bound;
  }

  void extend(std::size_t ci, int u) {
    if (!tick()) return;
    const Commodity& c = active_[ci];
    const double er = topo_.receive[c.g];
    for (int a : topo_.out_arcs[u]) {
      if (aborted_) return;
      const RouteArc& arc = topo_.route_arcs[a];
      const bool to_sink = is_sink_node(arc.to);
      if (!to_sink && visited_[arc.to]) continue;
      const double et = topo_.arc_transmit(a, c.g);
      comm_[u] += et;
      routes_[index(c.t, c.g, c.l)].push_back(a);
      if (to_sink) {
        if (batteries_ok(u) && !prunes(routing_bound(-1, c.g))) begin_commodity(ci + 1);
      } else {
        const int v = arc.to;
        visited_[v] = 1;
        comm_[v] += er;
        need_[static_cast<std::size_t>(v) * T_ + c.t] += 1;
        pending_[v] += met(v, c.g);
        if (batteries_ok(u, v) && !prunes(routing_bound(-1, c.g))) {
          pending_[v] -= met(v, c.g);
          extend(ci, v);
          pending_[v] += met(v, c.g);
        }
        pending_[v] -= met(v, c.g);
        need_[static_cast<std::size_t>(v) * T_ + c.t] -= 1;
        comm_[v] -= er;
        visited_[v] = 0;
      }
      routes_[index(c.t, c.g, c.l)].pop_back();
      comm_[u] -= et;
    }
  }

  void leaf() {
    double objective = fixed_penalty_;
    for (int i = 0; i < S_; ++i) {
      const double e = fixed_cost(i) + comm_[i];
      if (e > in_.device.battery_capacity + 1e-9) return;
      objective += e;
    }
    if (prunes(objective)) return;
    best_ = objective;
    improved_ = true;
    detail::Plan plan(S_, T_, G_);
    plan.sensing = sensing_;
    plan.routes = routes_;
    for (int i = 0; i < S_; ++i) {
      std::vector<char> pattern(T_, 0);
      fixed_cost(i, &pattern);
      for (int t = 0; t < T_; ++t) plan.active[static_cast<std::size_t>(i) * T_ + t] = pattern[t];
    }
    best_plan_ = std::move(plan);
  }

  const Instance& in_;
  const Topology& topo_;
  const SolveConfig& config_;
  int S_, D_, T_, G_;
  double multiplier_;
  std::chrono::steady_clock::time_point deadline_;

  std::vector<char> sensing_;
  std::vector<std::vector<int>> routes_;
  std::vector<int> need_;
  std::vector<double> comm_;
  std::vector<double> pending_;  // committed lower bounds on first-hop transmit
  std::vector<int> cover_count_;
  std::vector<double> min_et_;
  std::vector<int> position_;
  std::vector<Commodity> order_;

  std::vector<Commodity> active_;
  std::vector<char> visited_;
  double fixed_penalty_ = 0.0;

  double best_ = kInf;
  bool improved_ = false;
  detail::Plan best_plan_{0, 0, 0};
  long long nodes_ = 0;
  bool aborted_ = false;
};

}  // namespace

Solution solve_exact(const Instance& instance, const ArcSets& arcs, const IlpModel& model,
                     const SolveConfig& config) {
  const auto start = std::chrono::steady_clock::now();
  validate_instance(instance);
  const Topology topo = build_topology(instance, arcs);

  Solution incumbent = solve_heuristic(instance, arcs, config);
  BranchAndBound search(instance, topo, config);
  search.seed_incumbent(compute_metrics(instance, incumbent).objective);
  const bool complete = search.run();

  Solution result = search.improved()
                        ? detail::plan_to_solution(instance, topo, search.best_plan(), config.model,
                                                   Provenance::kExact)
                        : std::move(incumbent);
  result.provenance = Provenance::kExact;
  result.certified = complete;
  for (const auto& [ref, value] : result.values) {
    if (!model.find(ref)) {
      throw std::logic_error("exact search produced " + var_name(ref) + ", which the model lacks");
    }
  }
  result.wall_time_s = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return result;
}

}  // namespace wsn
