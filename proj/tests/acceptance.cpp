// One PASS/FAIL line per acceptance criterion. Exits non-zero when a
// criterion fails unless it is listed in kKnownGaps (see README).

#include <chrono>
#include <cstdio>
#include <fstream>
#include <functional>
#include <queue>
#include <set>
#include <sstream>
#include <string>

#include "support.hpp"
#include "wsn/lp_format.hpp"
#include "wsn/report.hpp"
#include "wsn/solve.hpp"
#include "wsn/validate.hpp"

namespace wsn {
namespace {

using testing::close_rel;

const std::set<std::string> kKnownGaps{"random-penalty"};

struct Verdict {
  bool pass = false;
  std::string detail;
};

struct Solved {
  Instance in;
  ArcSets arcs;
  std::vector<Solution> solutions;
};

// Shared by the feasibility, routing and battery criteria.
std::vector<Solved>& corpus() {
  static std::vector<Solved> all = [] {
    std::vector<Solved> out;
    for (Instance& in : testing::tiny_instances(50)) {
      ArcSets arcs = build_arcs(in);
      const IlpModel m = build_model(in, arcs);
      std::vector<Solution> sols{solve_exact(in, arcs, m), brute_force_oracle(in, arcs, m),
                                 solve_heuristic(in, arcs)};
      out.push_back({std::move(in), std::move(arcs), std::move(sols)});
    }
    for (std::uint64_t seed = 0; seed < 40; ++seed) {
      Instance in = scenario_random(1 + seed % 2, 1 + seed % 3, 100 + seed);
      ArcSets arcs = build_arcs(in);
      std::vector<Solution> sols{solve_heuristic(in, arcs)};
      out.push_back({std::move(in), std::move(arcs), std::move(sols)});
    }
    return out;
  }();
  return all;
}

std::string fmt(const char* f, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, v);
  return buf;
}

Verdict oracle_equivalence() {
  int agree = 0, total = 0, max_bin = 0, max_t = 0;
  for (const Instance& in : testing::tiny_instances(15)) {
    const ArcSets arcs = build_arcs(in);
    const IlpModel m = build_model(in, arcs);
    const Solution exact = solve_exact(in, arcs, m);
    const Solution oracle = brute_force_oracle(in, arcs, m);
    ++total;
    max_bin = std::max(max_bin, m.num_binaries());
    max_t = std::max(max_t, in.periods);
    agree += exact.certified &&
             close_rel(compute_metrics(in, exact).objective, compute_metrics(in, oracle).objective);
  }
  return {total >= 50 && agree == total && max_bin <= 40 && max_t <= 2,
          std::to_string(agree) + "/" + std::to_string(total) + " certified exact objectives equal the oracle (max " +
              std::to_string(max_bin) + " binaries, T<=" + std::to_string(max_t) + ")"};
}

Verdict universal_feasibility() {
  long long checked = 0, bad = 0;
  for (const Solved& s : corpus()) {
    for (const Solution& sol : s.solutions) {
      ++checked;
      bad += !check_feasibility(s.in, s.arcs, sol).empty();
    }
  }
  const std::size_t n = corpus().size();
  return {n >= 200 && bad == 0, std::to_string(checked - bad) + "/" + std::to_string(checked) +
                                    " exact/oracle/heuristic solutions feasible over " + std::to_string(n) +
                                    " instances"};
}

Verdict grid_coverage() {
  std::string detail;
  bool ok = true;
  for (int T = 1; T <= 3; ++T) {
    const Instance in = scenario_grid(1, T);
    const Metrics m = evaluate(in, solve_heuristic(in, build_arcs(in)));
    ok = ok && m.uncovered_rate == 0.0;
    detail += (T > 1 ? ", " : "") + std::string("T=") + std::to_string(T) + " " + fmt("%.4f%%", 100 * m.uncovered_rate);
  }
  return {ok, "scenario 1 grid uncovered: " + detail};
}

Verdict random_penalty() {
  std::string detail;
  bool ok = true;
  double pooled = 0.0;
  for (int T = 1; T <= 3; ++T) {
    double sum = 0.0;
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
      const Instance in = scenario_random(1, T, seed);
      sum += evaluate(in, solve_heuristic(in, build_arcs(in))).uncovered_rate;
    }
    const double mean = sum / 10;
    pooled += sum;
    ok = ok && mean > 0.0 && mean < 0.10;
    detail += (T > 1 ? ", " : "") + std::string("T=") + std::to_string(T) + " " + fmt("%.3f%%", 100 * mean);
  }
  return {ok, "mean uncovered over seeds 0-9: " + detail + " (pooled " + fmt("%.3f%%", 100 * pooled / 30) + ")"};
}

Verdict accounting() {
  int runs = 0;
  try {
    for (int scenario : {1, 2}) {
      ExperimentSpec spec;
      spec.scenario = scenario;
      runs += static_cast<int>(run_experiment(spec).size());
    }
  } catch (const std::exception& e) {
    return {false, e.what()};
  }
  bool ok = true;
  for (int T = 1; T <= 3; ++T) {
    Instance in = scenario_grid(1, T);
    in.penalties.activation.assign(in.penalties.activation.size(), 0.0);
    const Metrics m = evaluate(in, solve_heuristic(in, build_arcs(in)));
    ok = ok && m.uncovered_rate == 0.0 && m.objective == m.real_objective;
  }
  for (const Solved& s : corpus()) {
    for (const Solution& sol : s.solutions) {
      const Metrics m = compute_metrics(s.in, sol);
      ok = ok && close_rel(m.objective - m.real_objective, m.penalty_total, 1e-12) && m.objective >= m.real_objective;
    }
  }
  return {ok, std::to_string(runs) + " experiment cells checked in-run; EG=0 grid objective == real objective"};
}

Verdict monotonicity() {
  ScenarioConfig cfg = default_config();
  cfg.phenomena = {Phenomenon{0, 8.8, 2.0, 16}};
  std::string detail = "exact tiny grid:";
  bool ok = true;
  double prev = 0.0;
  for (int T = 1; T <= 3; ++T) {
    cfg.periods = T;
    const Instance in = gen_grid(1, 2, 2, 2, Area{4, 4}, cfg);
    const ArcSets arcs = build_arcs(in);
    const Solution sol = solve_exact(in, arcs, build_model(in, arcs));
    const double obj = evaluate(in, sol).objective;
    ok = ok && sol.certified && obj >= prev;
    prev = obj;
    detail += fmt(" %.6g", obj);
  }
  detail += "; heuristic scenario 1 grid:";
  prev = 0.0;
  for (int T = 1; T <= 6; ++T) {
    const Instance in = scenario_grid(1, T);
    const double obj = evaluate(in, solve_heuristic(in, build_arcs(in))).objective;
    ok = ok && obj >= prev;
    prev = obj;
    detail += fmt(" %.6g", obj);
  }
  return {ok, detail};
}

Instance scaled(Instance in, double k) {
  DeviceProfile& d = in.device;
  d.battery_capacity *= k;
  d.activation_energy *= k;
  d.maintenance_energy *= k;
  d.receive_energy_per_bit *= k;
  d.transmit.base_per_bit *= k;
  d.transmit.quadratic_per_bit *= k;
  for (double& p : in.penalties.uncovered) p *= k;
  for (double& p : in.penalties.activation) p *= k;
  return in;
}

std::vector<double> binary_part(const IlpModel& m, const Solution& s) {
  std::vector<double> cols = to_columns(m, s);
  for (std::size_t c = 0; c < cols.size(); ++c) {
    if (!m.variables()[c].integer) cols[c] = 0.0;
  }
  return cols;
}

Verdict scale_invariance() {
  const double k = 7.3;
  int ok_count = 0, total = 0;
  for (const Instance& in : testing::tiny_instances(15)) {
    const Instance big = scaled(in, k);
    const ArcSets arcs = build_arcs(in);
    const IlpModel m = build_model(in, arcs), mb = build_model(big, arcs);
    const Solution a = solve_exact(in, arcs, m), b = solve_exact(big, arcs, mb);
    const Solution oa = brute_force_oracle(in, arcs, m), ob = brute_force_oracle(big, arcs, mb);
    const double opt = compute_metrics(in, a).objective, opt_big = compute_metrics(big, b).objective;
    // Each optimum stays optimal under the other scaling.
    Solution a_in_big = oa, b_in_small = ob;
    for (int i = 0; i < in.num_sensors(); ++i) {
      a_in_big.set(VarRef::e(i), oa.value(VarRef::e(i)) * k);
      b_in_small.set(VarRef::e(i), ob.value(VarRef::e(i)) / k);
    }
    const bool good = a.certified && b.certified && close_rel(opt_big, k * opt) &&
                      binary_part(m, oa) == binary_part(mb, ob) &&
                      check_feasibility(big, arcs, a_in_big).empty() &&
                      check_feasibility(in, arcs, b_in_small).empty() &&
                      close_rel(compute_metrics(big, a_in_big).objective, opt_big) &&
                      close_rel(compute_metrics(in, b_in_small).objective, opt);
    ok_count += good;
    ++total;
  }
  return {ok_count == total && total >= 50,
          std::to_string(ok_count) + "/" + std::to_string(total) + " tiny instances: objective x7.3, same argmin"};
}

Verdict routing_soundness() {
  long long commodities = 0, broken = 0;
  for (const Solved& s : corpus()) {
    for (const Solution& sol : s.solutions) {
      for (const auto& [ref, v] : sol.values) {
        if (ref.kind != VarKind::kR || v != 1.0) continue;
        const int l = ref.idx[0], t = ref.idx[1], g = ref.idx[2];
        ++commodities;
        std::set<int> seen{l};
        std::queue<int> q;
        q.push(l);
        bool reached = false;
        while (!q.empty() && !reached) {
          const int at = q.front();
          q.pop();
          if (!sol.on(VarRef::y(at, t))) continue;
          for (const auto& [z, zv] : sol.values) {
            if (z.kind != VarKind::kZ || zv != 1.0 || z.idx[0] != l || z.idx[1] != at || z.idx[3] != t ||
                z.idx[4] != g) {
              continue;
            }
            if (is_sink_node(z.idx[2])) {
              reached = true;
            } else if (sol.on(VarRef::y(z.idx[2], t)) && seen.insert(z.idx[2]).second) {
              q.push(z.idx[2]);
            }
          }
        }
        broken += !reached;
      }
    }
  }
  return {broken == 0 && commodities > 0, std::to_string(commodities - broken) + "/" + std::to_string(commodities) +
                                              " sensing commodities reach a sink over active sensors"};
}

Verdict lp_round_trip() {
  std::mt19937_64 rng(7);
  int same = 0;
  for (int k = 0; k < 100; ++k) {
    const Instance in = testing::random_model_instance(rng);
    const std::string text = export_lp(build_model(in, build_arcs(in)));
    same += export_lp(parse_lp(text)) == text;
  }
  std::ifstream f(std::string(WSN_TEST_DATA) + "/trivial.lp", std::ios::binary);
  std::stringstream golden;
  golden << f.rdbuf();
  const Instance triv = testing::trivial_instance();
  const bool golden_ok = !golden.str().empty() && export_lp(build_model(triv, build_arcs(triv))) == golden.str();
  return {same == 100 && golden_ok, std::to_string(same) + "/100 byte-identical round trips; golden file " +
                                        (golden_ok ? "matches" : "differs")};
}

Verdict battery_caps() {
  long long over = 0, checked = 0;
  for (const Solved& s : corpus()) {
    for (const Solution& sol : s.solutions) {
      for (int i = 0; i < s.in.num_sensors(); ++i) {
        ++checked;
        over += sol.value(VarRef::e(i)) > s.in.device.battery_capacity;
      }
    }
  }
  int all_penalty = 0, runs = 0;
  auto drained = [](Instance in) {
    in.device.battery_capacity = 0.0;
    return in;
  };
  std::vector<Instance> cases;
  for (const Instance& in : testing::tiny_instances(3)) cases.push_back(drained(in));
  for (std::uint64_t seed = 0; seed < 4; ++seed) cases.push_back(drained(scenario_random(1, 2, seed)));
  cases.push_back(drained(scenario_grid(1, 3)));
  for (const Instance& in : cases) {
    const ArcSets arcs = build_arcs(in);
    const IlpModel m = build_model(in, arcs);
    std::vector<Solution> sols{solve_heuristic(in, arcs), solve_exact(in, arcs, m)};
    if (m.num_binaries() <= 40) sols.push_back(brute_force_oracle(in, arcs, m));
    for (const Solution& sol : sols) {
      ++runs;
      const Metrics met = evaluate(in, sol);
      all_penalty += met.real_objective == 0.0 && met.uncovered_rate == 1.0 && met.activations == 0;
    }
  }
  return {over == 0 && all_penalty == runs,
          std::to_string(checked - over) + "/" + std::to_string(checked) + " e_i within EB; EB=0 all-penalty in " +
              std::to_string(all_penalty) + "/" + std::to_string(runs) + " runs"};
}

}  // namespace
}  // namespace wsn

int main() {
  using namespace wsn;
  const std::vector<std::pair<std::string, std::function<Verdict()>>> criteria{
      {"oracle-equivalence", oracle_equivalence}, {"universal-feasibility", universal_feasibility},
      {"grid-coverage", grid_coverage},           {"random-penalty", random_penalty},
      {"accounting-identity", accounting},        {"monotonicity", monotonicity},
      {"scale-invariance", scale_invariance},     {"routing-soundness", routing_soundness},
      {"lp-round-trip", lp_round_trip},           {"battery-caps", battery_caps},
  };
  int failed = 0, unexpected = 0;
  for (const auto& [name, check] : criteria) {
    const auto t0 = std::chrono::steady_clock::now();
    Verdict v;
    try {
      v = check();
    } catch (const std::exception& e) {
      v = {false, std::string("threw: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    const bool known = kKnownGaps.count(name) > 0;
    std::printf("%s  %-22s %s (%.2f s)%s\n", v.pass ? "PASS" : "FAIL", name.c_str(), v.detail.c_str(), secs,
                !v.pass && known ? " [known gap]" : "");
    if (!v.pass) {
      ++failed;
      unexpected += !known;
    }
  }
  std::printf("%d/%zu criteria passed\n", static_cast<int>(criteria.size()) - failed, criteria.size());
  return unexpected == 0 ? 0 : 1;
}
