#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <map>
#include <string>
#include <tuple>

#include "wsn/energy.hpp"
#include "wsn/solve.hpp"
#include "wsn/validate.hpp"

namespace wsn {

namespace {

constexpr int kMaxCommodityArcs = 24;

struct Arc {
  int from, to;
  double transmit;
};

// One commodity's arc pattern and what it costs each sensor.
struct Flow {
  std::vector<char> used;
  std::vector<std::pair<int, double>> energy;  // (sensor, energy)
  std::vector<int> touched;                    // sensors that must be active
};

struct Commodity {
  int t, g, l;
  std::vector<Arc> arcs;
  std::vector<Flow> flows;
};

Point2D node_position(const Instance& in, int node) {
  return is_sink_node(node) ? in.sinks[sink_of(node)] : in.sensors[node];
}

// Every arc subset with one unit leaving l and balance at every other sensor.
std::vector<Flow> enumerate_flows(const Instance& in, const Commodity& c, double receive) {
  const int S = in.num_sensors();
  const int k = static_cast<int>(c.arcs.size());
  if (k > kMaxCommodityArcs) {
    throw OracleCapExceeded("commodity of sensor " + std::to_string(c.l) + " has " + std::to_string(k) +
                            " arcs, above the oracle limit of " + std::to_string(kMaxCommodityArcs));
  }
  std::vector<Flow> flows;
  std::vector<int> balance(S);
  for (long long mask = 0; mask < (1LL << k); ++mask) {
    std::fill(balance.begin(), balance.end(), 0);
    for (int a = 0; a < k; ++a) {
      if (!(mask >> a & 1)) continue;
      balance[c.arcs[a].from] -= 1;
      if (!is_sink_node(c.arcs[a].to)) balance[c.arcs[a].to] += 1;
    }
    bool ok = balance[c.l] == -1;
    for (int j = 0; ok && j < S; ++j) ok = j == c.l || balance[j] == 0;
    if (!ok) continue;
    Flow f;
    f.used.assign(k, 0);
    std::vector<char> touched(S, 0);
    touched[c.l] = 1;
    for (int a = 0; a < k; ++a) {
      if (!(mask >> a & 1)) continue;
      f.used[a] = 1;
      f.energy.push_back({c.arcs[a].from, c.arcs[a].transmit});
      touched[c.arcs[a].from] = 1;
      if (!is_sink_node(c.arcs[a].to)) {
        f.energy.push_back({c.arcs[a].to, receive});
        touched[c.arcs[a].to] = 1;
      }
    }
    for (int i = 0; i < S; ++i) {
      if (touched[i]) f.touched.push_back(i);
    }
    flows.push_back(std::move(f));
  }
  return flows;
}

class Enumerator {
 public:
  Enumerator(const Instance& in, const ArcSets& arcs, const IlpModel& model, const OracleCaps& caps,
             const ModelOptions& options)
      : in_(in),
        arcs_(arcs),
        model_(model),
        caps_(caps),
        options_(options),
        S_(in.num_sensors()),
        D_(in.num_demand_points()),
        T_(in.periods),
        G_(in.num_phenomena()),
        multiplier_(options.fixed_energy_multiplier(G_)) {
    receive_.resize(G_);
    for (int g = 0; g < G_; ++g) {
      receive_[g] = derive_energy_constants(in.device, in.phenomena[g], in.period_length_min, 0.0).receive;
    }
    // Commodities and their arcs come straight from the model's z columns.
    std::map<std::tuple<int, int, int>, std::size_t> slot;
    for (const Variable& v : model.variables()) {
      if (v.ref.kind != VarKind::kZ) continue;
      const auto [l, from, to, t, g] = v.ref.idx;
      const auto key = std::make_tuple(t, g, l);
      auto it = slot.find(key);
      if (it == slot.end()) {
        it = slot.emplace(key, commodities_.size()).first;
        commodities_.push_back({t, g, l, {}, {}});
      }
      const Point2D a = in.sensors[from];
      const Point2D b = node_position(in, to);
      const double d = std::sqrt((a.x - b.x) * (a.x - b.x) + (a.y - b.y) * (a.y - b.y));
      const double et = derive_energy_constants(in.device, in.phenomena[g], in.period_length_min, d).transmit;
      commodities_[it->second].arcs.push_back({from, to, et});
    }
    for (Commodity& c : commodities_) c.flows = enumerate_flows(in, c, receive_[c.g]);

    reach_.assign(static_cast<std::size_t>(S_) * G_, {});
    for (int g = 0; g < G_; ++g) {
      for (const CoverArc& a : arcs.coverage[g]) {
        if (in.demand_points[a.demand_point].demands_phenomenon(g)) {
          reach_[static_cast<std::size_t>(a.sensor) * G_ + g].push_back(a.demand_point);
        }
      }
    }
  }

  Solution run() {
    const int R = static_cast<int>(commodities_.size());
    if (R >= 62) throw OracleCapExceeded("too many commodities for the oracle");
    for (long long mask = 0; mask < (1LL << R); ++mask) {
      sensing_.assign(R, 0);
      for (int c = 0; c < R; ++c) sensing_[c] = mask >> c & 1;
      if (!sensing_feasible()) continue;
      penalty_ = sensing_penalty();
      choice_.assign(R, -1);
      choose_flow(0);
    }
    Solution sol = best_;
    sol.provenance = Provenance::kOracle;
    sol.certified = true;
    return sol;
  }

 private:
  bool sensing_feasible() const {
    for (std::size_t c = 0; c < commodities_.size(); ++c) {
      if (sensing_[c] && commodities_[c].flows.empty()) return false;
    }
    return true;
  }

  double sensing_penalty() const {
    double p = 0.0;
    std::vector<char> covered(static_cast<std::size_t>(D_) * T_ * G_, 0);
    for (std::size_t c = 0; c < commodities_.size(); ++c) {
      if (!sensing_[c]) continue;
      const Commodity& k = commodities_[c];
      p += in_.activation_penalty(k.l, k.g);
      for (int j : reach_[static_cast<std::size_t>(k.l) * G_ + k.g]) {
        covered[(static_cast<std::size_t>(j) * T_ + k.t) * G_ + k.g] = 1;
      }
    }
    for (int j = 0; j < D_; ++j) {
      for (int t = 0; t < T_; ++t) {
        for (int g = 0; g < G_; ++g) {
          if (in_.demand_points[j].demands_phenomenon(g) &&
              !covered[(static_cast<std::size_t>(j) * T_ + t) * G_ + g]) {
            p += in_.uncovered_penalty(j, g);
          }
        }
      }
    }
    return p;
  }

  void choose_flow(std::size_t c) {
    if (c == commodities_.size()) {
      choose_activity();
      return;
    }
    if (!sensing_[c]) {
      choose_flow(c + 1);
      return;
    }
    for (std::size_t f = 0; f < commodities_[c].flows.size(); ++f) {
      choice_[c] = static_cast<int>(f);
      choose_flow(c + 1);
    }
    choice_[c] = -1;
  }

  void choose_activity() {
    std::vector<char> need(static_cast<std::size_t>(S_) * T_, 0);
    comm_.assign(S_, 0.0);
    for (std::size_t c = 0; c < commodities_.size(); ++c) {
      if (!sensing_[c]) continue;
      const Commodity& k = commodities_[c];
      const Flow& f = k.flows[choice_[c]];
      for (int i : f.touched) need[static_cast<std::size_t>(i) * T_ + k.t] = 1;
      for (const auto& [i, e] : f.energy) comm_[i] += e;
    }
    std::vector<std::size_t> free;
    for (std::size_t b = 0; b < need.size(); ++b) {
      if (!need[b]) free.push_back(b);
    }
    if (free.size() >= 62) throw OracleCapExceeded("too many free activity bits for the oracle");
    std::vector<char> y = need;
    for (long long mask = 0; mask < (1LL << free.size()); ++mask) {
      if (++candidates_ > caps_.max_candidates) {
        throw OracleCapExceeded("oracle enumerated more than " + std::to_string(caps_.max_candidates) +
                                " candidates");
      }
      for (std::size_t b = 0; b < free.size(); ++b) y[free[b]] = mask >> b & 1;
      consider(y);
    }
  }

  void consider(const std::vector<char>& y) {
    const DeviceProfile& dev = in_.device;
    const double cap = dev.battery_capacity;
    std::vector<double> energy(S_);
    double objective = penalty_;
    for (int i = 0; i < S_; ++i) {
      int on = 0, starts = 0;
      for (int t = 0; t < T_; ++t) {
        const bool now = y[static_cast<std::size_t>(i) * T_ + t];
        const bool before = t > 0 && y[static_cast<std::size_t>(i) * T_ + t - 1];
        on += now;
        starts += now && !before;
      }
      double e = multiplier_ * (dev.maintenance_energy * on + dev.activation_energy * starts) + comm_[i];
      if (e > cap) {
        if (e - cap > 1e-9 * std::max(1.0, cap)) return;
        e = cap;
      }
      energy[i] = e;
      objective += e;
    }
    const double tol = 1e-9 * std::max(1.0, std::abs(best_objective_));
    if (have_best_ && objective > best_objective_ + tol) return;

    Solution candidate = assemble(y, energy);
    std::vector<double> columns = to_columns(model_, candidate);
    std::vector<char> bits;
    bits.reserve(columns.size());
    for (std::size_t k = 0; k < columns.size(); ++k) {
      if (model_.variables()[k].ref.binary()) bits.push_back(columns[k] != 0.0);
    }
    if (have_best_ && objective >= best_objective_ - tol && !(bits < best_bits_)) return;
    if (!check_feasibility(in_, arcs_, candidate, options_).empty()) return;
    have_best_ = true;
    best_objective_ = objective;
    best_bits_ = std::move(bits);
    best_ = std::move(candidate);
  }

  Solution assemble(const std::vector<char>& y, const std::vector<double>& energy) const {
    Solution sol;
    for (int i = 0; i < S_; ++i) {
      for (int t = 0; t < T_; ++t) {
        const bool now = y[static_cast<std::size_t>(i) * T_ + t];
        const bool before = t > 0 && y[static_cast<std::size_t>(i) * T_ + t - 1];
        if (now) sol.set(VarRef::y(i, t), 1.0);
        if (now && !before) sol.set(VarRef::w(i, t), 1.0);
      }
      sol.set(VarRef::e(i), energy[i]);
    }
    std::vector<char> covered(static_cast<std::size_t>(D_) * T_ * G_, 0);
    for (std::size_t c = 0; c < commodities_.size(); ++c) {
      if (!sensing_[c]) continue;
      const Commodity& k = commodities_[c];
      sol.set(VarRef::r(k.l, k.t, k.g), 1.0);
      for (int j : reach_[static_cast<std::size_t>(k.l) * G_ + k.g]) {
        sol.set(VarRef::x(k.l, j, k.t, k.g), 1.0);
        covered[(static_cast<std::size_t>(j) * T_ + k.t) * G_ + k.g] = 1;
      }
      const Flow& f = k.flows[choice_[c]];
      for (std::size_t a = 0; a < k.arcs.size(); ++a) {
        if (f.used[a]) sol.set(VarRef::z(k.l, k.arcs[a].from, k.arcs[a].to, k.t, k.g), 1.0);
      }
    }
    for (int j = 0; j < D_; ++j) {
      for (int t = 0; t < T_; ++t) {
        for (int g = 0; g < G_; ++g) {
          if (in_.demand_points[j].demands_phenomenon(g) &&
              !covered[(static_cast<std::size_t>(j) * T_ + t) * G_ + g]) {
            sol.set(VarRef::h(j, t, g), 1.0);
          }
        }
      }
    }
    return sol;
  }

  const Instance& in_;
  const ArcSets& arcs_;
  const IlpModel& model_;
  const OracleCaps& caps_;
  const ModelOptions& options_;
  int S_, D_, T_, G_;
  double multiplier_;
  std::vector<double> receive_;
  std::vector<Commodity> commodities_;
  std::vector<std::vector<int>> reach_;  // demanded points per (i, g)

  std::vector<char> sensing_;
  std::vector<int> choice_;
  std::vector<double> comm_;
  double penalty_ = 0.0;
  long long candidates_ = 0;

  bool have_best_ = false;
  double best_objective_ = 0.0;
  std::vector<char> best_bits_;
  Solution best_;
};

}  // namespace

Solution brute_force_oracle(const Instance& instance, const ArcSets& arcs, const IlpModel& model,
                            const OracleCaps& caps, const ModelOptions& options) {
  const auto start = std::chrono::steady_clock::now();
  validate_instance(instance);
  check_arcs_match(instance, arcs);
  const int binaries = model.num_binaries();
  if (binaries > caps.max_binaries) {
    throw OracleCapExceeded("model has " + std::to_string(binaries) + " binaries, above the oracle cap of " +
                            std::to_string(caps.max_binaries));
  }
  Solution sol = Enumerator(instance, arcs, model, caps, options).run();
  sol.wall_time_s = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return sol;
}

}  // namespace wsn
