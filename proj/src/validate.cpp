#include "wsn/validate.hpp"

#include <cmath>
#include <set>
#include <sstream>
#include <utility>

#include "wsn/energy.hpp"

namespace wsn {

namespace {

struct Lookup {
  int S = 0, D = 0, M = 0, T = 0, G = 0;
  std::vector<std::set<std::pair<int, int>>> coverage;  // demanded pairs only
  std::set<std::pair<int, int>> links;                  // (sensor, node), node < 0 for sinks
  std::vector<std::vector<char>> source;                // [g][l]
  std::vector<std::vector<int>> out;                    // sensor -> heads
  std::vector<std::vector<int>> in;                     // sensor -> tails
  std::vector<std::vector<char>> demands;               // [j][g]
};

Lookup make_lookup(const Instance& in, const ArcSets& arcs) {
  Lookup lk;
  lk.S = in.num_sensors();
  lk.D = in.num_demand_points();
  lk.M = in.num_sinks();
  lk.T = in.periods;
  lk.G = in.num_phenomena();
  if (arcs.num_sensors != lk.S || arcs.num_demand_points != lk.D || arcs.num_sinks != lk.M ||
      static_cast<int>(arcs.coverage.size()) != lk.G) {
    throw SolutionIndexError("arc sets do not match the instance");
  }
  lk.demands.assign(lk.D, std::vector<char>(lk.G, 0));
  for (int j = 0; j < lk.D; ++j) {
    for (int g : in.demand_points[j].demands) lk.demands[j][g] = 1;
  }
  lk.coverage.resize(lk.G);
  lk.source.assign(lk.G, std::vector<char>(lk.S, 0));
  for (int g = 0; g < lk.G; ++g) {
    for (const CoverArc& a : arcs.coverage[g]) {
      if (in.demand_points[a.demand_point].demands_phenomenon(g)) {
        lk.coverage[g].insert({a.sensor, a.demand_point});
        lk.source[g][a.sensor] = 1;
      }
    }
  }
  lk.out.assign(lk.S, {});
  lk.in.assign(lk.S, {});
  for (const auto& [i, j] : arcs.comm) {
    lk.links.insert({i, j});
    lk.out[i].push_back(j);
    lk.in[j].push_back(i);
  }
  for (const auto& [i, m] : arcs.to_sink) {
    lk.links.insert({i, sink_node(m)});
    lk.out[i].push_back(sink_node(m));
  }
  return lk;
}

bool in_range(int v, int n) { return v >= 0 && v < n; }

// Empty string when `ref` is inside the instance's index space.
std::string domain_problem(const Lookup& lk, const VarRef& ref) {
  const auto& k = ref.idx;
  switch (ref.kind) {
    case VarKind::kX:
      if (!in_range(k[0], lk.S) || !in_range(k[1], lk.D) || !in_range(k[2], lk.T) || !in_range(k[3], lk.G)) return "index out of range";
      if (!lk.coverage[k[3]].count({k[0], k[1]})) return "no coverage arc for a demanded point";
      return {};
    case VarKind::kY:
    case VarKind::kW:
      if (!in_range(k[0], lk.S) || !in_range(k[1], lk.T)) return "index out of range";
      return {};
    case VarKind::kZ:
      if (!in_range(k[0], lk.S) || !in_range(k[1], lk.S) || !in_range(k[3], lk.T) || !in_range(k[4], lk.G)) return "index out of range";
      if (is_sink_node(k[2]) ? !in_range(sink_of(k[2]), lk.M) : !in_range(k[2], lk.S)) return "index out of range";
      if (!lk.links.count({k[1], k[2]})) return "no communication arc";
      if (!lk.source[k[4]][k[0]]) return "route source cannot sense the phenomenon";
      if (k[2] == k[0]) return "arc enters its own route source";
      return {};
    case VarKind::kR:
      if (!in_range(k[0], lk.S) || !in_range(k[1], lk.T) || !in_range(k[2], lk.G)) return "index out of range";
      return {};
    case VarKind::kH:
      if (!in_range(k[0], lk.D) || !in_range(k[1], lk.T) || !in_range(k[2], lk.G)) return "index out of range";
      if (!lk.demands[k[0]][k[2]]) return "point does not demand the phenomenon";
      return {};
    case VarKind::kE:
      if (!in_range(k[0], lk.S)) return "index out of range";
      return {};
  }
  return "unknown kind";
}

class Checker {
 public:
  Checker(const Solution& sol, std::vector<Violation>& out) : sol_(sol), out_(out) {}

  double v(const VarRef& ref) const { return sol_.value(ref); }

  void row(ConstraintTag tag, double lhs, Sense sense, double rhs, double tol) {
    double slack = 0.0;
    switch (sense) {
      case Sense::kLe: slack = rhs - lhs; break;
      case Sense::kGe: slack = lhs - rhs; break;
      case Sense::kEq: slack = -std::abs(lhs - rhs); break;
    }
    if (slack < -tol || std::isnan(lhs)) {
      out_.push_back({tag, lhs, sense, rhs, std::isnan(lhs) ? -INFINITY : slack, tag_name(tag)});
    }
  }

 private:
  const Solution& sol_;
  std::vector<Violation>& out_;
};

}  // namespace

InfeasibleSolution::InfeasibleSolution(std::vector<Violation> violations, const std::string& context)
    : std::runtime_error((context.empty() ? std::string() : context + ": ") + "solution violates " + std::to_string(violations.size()) + " constraint(s)" +
                         (violations.empty() ? std::string() : "; first: " + describe(violations.front()))),
      violations_(std::move(violations)) {}

std::string describe(const Violation& v) {
  std::ostringstream os;
  os << v.detail << ": lhs " << v.lhs << ' ' << sense_symbol(v.sense) << ' ' << v.rhs << " (slack "
     << v.slack << ')';
  return os.str();
}

std::vector<Violation> check_feasibility(const Instance& in, const ArcSets& arcs,
                                         const Solution& sol, const ModelOptions& options) {
  const Lookup lk = make_lookup(in, arcs);
  {
    std::string bad;
    int count = 0;
    for (const auto& [ref, value] : sol.values) {
      const std::string why = domain_problem(lk, ref);
      if (why.empty()) continue;
      if (count++ < 5) bad += (bad.empty() ? "" : "; ") + var_name(ref) + " (" + why + ")";
    }
    if (count > 0) {
      throw SolutionIndexError("solution references " + std::to_string(count) +
                               " variable(s) outside the instance: " + bad);
    }
  }

  std::vector<Violation> out;
  Checker ck(sol, out);
  const int S = lk.S, D = lk.D, T = lk.T, G = lk.G;

  // C13: binaries are 0 or 1; C10: 0 <= e <= EB.
  for (const auto& [ref, value] : sol.values) {
    if (ref.binary()) {
      if (value != 0.0 && value != 1.0) {
        out.push_back({{Family::C13, ref.idx}, value, Sense::kEq, 1.0, -std::abs(value - std::round(value)) - (std::isnan(value) ? INFINITY : 0.0), var_name(ref)});
      }
    }
  }
  for (int i = 0; i < S; ++i) {
    const double e = ck.v(VarRef::e(i));
    if (!(e >= -kContinuousTolerance)) out.push_back({{Family::C10, {i}}, e, Sense::kGe, 0.0, e, "C10_i" + std::to_string(i)});
    const double eb = in.device.battery_capacity;
    if (!(e <= eb + kContinuousTolerance)) out.push_back({{Family::C10, {i}}, e, Sense::kLe, eb, eb - e, "C10_i" + std::to_string(i)});
  }

  for (int j = 0; j < D; ++j) {
    for (int g = 0; g < G; ++g) {
      if (!in.demand_points[j].demands_phenomenon(g)) continue;
      for (int t = 0; t < T; ++t) {
        double lhs = ck.v(VarRef::h(j, t, g));
        for (int i = 0; i < S; ++i) {
          if (lk.coverage[g].count({i, j})) lhs += ck.v(VarRef::x(i, j, t, g));
        }
        ck.row({Family::C2, {j, t, g}}, lhs, Sense::kGe, 1.0, 0.0);
      }
    }
  }
  for (int g = 0; g < G; ++g) {
    for (const auto& [i, j] : lk.coverage[g]) {
      for (int t = 0; t < T; ++t) {
        ck.row({Family::C3, {i, j, t, g}}, ck.v(VarRef::x(i, j, t, g)) - ck.v(VarRef::r(i, t, g)), Sense::kLe, 0.0, 0.0);
      }
    }
  }
  for (int i = 0; i < S; ++i) {
    for (int t = 0; t < T; ++t) {
      for (int g = 0; g < G; ++g) {
        ck.row({Family::C4, {i, t, g}}, ck.v(VarRef::r(i, t, g)) - ck.v(VarRef::y(i, t)), Sense::kLe, 0.0, 0.0);
      }
    }
  }
  for (int t = 0; t < T; ++t) {
    for (int g = 0; g < G; ++g) {
      for (int l = 0; l < S; ++l) {
        double outflow = 0.0;
        if (lk.source[g][l]) {
          for (int k : lk.out[l]) outflow += ck.v(VarRef::z(l, l, k, t, g));
          for (int j = 0; j < S; ++j) {
            if (j == l) continue;
            double bal = 0.0;
            for (int k : lk.in[j]) bal += ck.v(VarRef::z(l, k, j, t, g));
            for (int k : lk.out[j]) {
              if (k != l) bal -= ck.v(VarRef::z(l, j, k, t, g));
            }
            ck.row({Family::C5, {l, j, t, g}}, bal, Sense::kEq, 0.0, 0.0);
          }
        }
        ck.row({Family::C6, {l, t, g}}, outflow - ck.v(VarRef::r(l, t, g)), Sense::kEq, 0.0, 0.0);
      }
    }
  }
  for (int t = 0; t < T; ++t) {
    for (int g = 0; g < G; ++g) {
      for (int l = 0; l < S; ++l) {
        if (!lk.source[g][l]) continue;
        for (const auto& [i, k] : lk.links) {
          if (k == l) continue;
          const double z = ck.v(VarRef::z(l, i, k, t, g));
          const std::array<int, 5> idx{l, i, k, t, g};
          ck.row({Family::C7, idx}, z - ck.v(VarRef::y(i, t)), Sense::kLe, 0.0, 0.0);
          if (!is_sink_node(k)) ck.row({Family::C8, idx}, z - ck.v(VarRef::y(k, t)), Sense::kLe, 0.0, 0.0);
        }
      }
    }
  }

  // C9 from first principles: hop energies from geometry.
  const double fixed = options.fixed_energy_multiplier(G);
  const DeviceProfile& dev = in.device;
  for (int i = 0; i < S; ++i) {
    double lhs = 0.0;
    for (int t = 0; t < T; ++t) {
      lhs += fixed * (dev.maintenance_energy * ck.v(VarRef::y(i, t)) +
                      dev.activation_energy * ck.v(VarRef::w(i, t)));
    }
    for (int g = 0; g < G; ++g) {
      const Phenomenon& ph = in.phenomena[g];
      const double er = derive_energy_constants(dev, ph, in.period_length_min, 0.0).receive;
      for (int k : lk.out[i]) {
        const Point2D& head = is_sink_node(k) ? in.sinks[sink_of(k)] : in.sensors[k];
        const double et =
            derive_energy_constants(dev, ph, in.period_length_min, distance(in.sensors[i], head)).transmit;
        for (int t = 0; t < T; ++t) {
          for (int l = 0; l < S; ++l) {
            if (lk.source[g][l] && k != l) lhs += et * ck.v(VarRef::z(l, i, k, t, g));
          }
        }
      }
      for (int k : lk.in[i]) {
        for (int t = 0; t < T; ++t) {
          for (int l = 0; l < S; ++l) {
            if (lk.source[g][l] && l != i) lhs += er * ck.v(VarRef::z(l, k, i, t, g));
          }
        }
      }
    }
    ck.row({Family::C9, {i}}, lhs - ck.v(VarRef::e(i)), Sense::kLe, 0.0, kContinuousTolerance);
  }
  for (int i = 0; i < S; ++i) {
    ck.row({Family::C11, {i}}, ck.v(VarRef::w(i, 0)) - ck.v(VarRef::y(i, 0)), Sense::kGe, 0.0, 0.0);
    for (int t = 1; t < T; ++t) {
      ck.row({Family::C12, {i, t}},
             ck.v(VarRef::w(i, t)) - ck.v(VarRef::y(i, t)) + ck.v(VarRef::y(i, t - 1)), Sense::kGe, 0.0, 0.0);
    }
  }

  // Each sensing sensor reaches a sink over used arcs and active sensors.
  for (int t = 0; t < T; ++t) {
    for (int g = 0; g < G; ++g) {
      for (int l = 0; l < S; ++l) {
        if (ck.v(VarRef::r(l, t, g)) != 1.0) continue;
        bool reached = false;
        if (ck.v(VarRef::y(l, t)) == 1.0 && lk.source[g][l]) {
          std::vector<char> seen(S, 0);
          std::vector<int> stack{l};
          seen[l] = 1;
          while (!stack.empty() && !reached) {
            const int u = stack.back();
            stack.pop_back();
            for (int k : lk.out[u]) {
              if (k == l || ck.v(VarRef::z(l, u, k, t, g)) != 1.0) continue;
              if (is_sink_node(k)) {
                reached = true;
                break;
              }
              if (!seen[k] && ck.v(VarRef::y(k, t)) == 1.0) {
                seen[k] = 1;
                stack.push_back(k);
              }
            }
          }
        }
        if (!reached) ck.row({Family::kRoute, {l, t, g}}, 0.0, Sense::kGe, 1.0, 0.0);
      }
    }
  }
  return out;
}

Metrics compute_metrics(const Instance& in, const Solution& sol) {
  Metrics m;
  const int S = in.num_sensors();
  const int D = in.num_demand_points();
  const int T = in.periods;
  const int G = in.num_phenomena();
  m.per_sensor_energy.resize(S);
  for (int i = 0; i < S; ++i) {
    m.per_sensor_energy[i] = sol.value(VarRef::e(i));
    m.real_objective += m.per_sensor_energy[i];
    for (int t = 0; t < T; ++t) m.activations += sol.on(VarRef::w(i, t)) ? 1 : 0;
  }
  for (int t = 0; t < T; ++t) {
    for (int g = 0; g < G; ++g) {
      for (int j = 0; j < D; ++j) {
        if (!in.demand_points[j].demands_phenomenon(g)) continue;
        ++m.demanded_triples;
        const double h = sol.value(VarRef::h(j, t, g));
        if (h != 0.0) {
          ++m.uncovered;
          m.penalty_total += in.uncovered_penalty(j, g) * h;
        }
      }
      for (int i = 0; i < S; ++i) {
        const double r = sol.value(VarRef::r(i, t, g));
        if (r != 0.0) m.penalty_total += in.activation_penalty(i, g) * r;
      }
    }
  }
  m.objective = m.real_objective + m.penalty_total;
  m.uncovered_rate = m.demanded_triples == 0
                         ? 0.0
                         : static_cast<double>(m.uncovered) / static_cast<double>(m.demanded_triples);
  return m;
}

Metrics evaluate(const Instance& in, const Solution& sol, const ModelOptions& options) {
  auto violations = check_feasibility(in, build_arcs(in), sol, options);
  if (!violations.empty()) throw InfeasibleSolution(std::move(violations));
  return compute_metrics(in, sol);
}

}  // namespace wsn
