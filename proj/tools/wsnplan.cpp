// wsnplan: generate instances, export models, solve, validate, render and
// run experiments. Exit codes: 0 ok, 1 validation failure, 2 usage error,
// 3 search limit reached without an optimality certificate.

#include <cstdio>
#include <filesystem>
#include <iostream>
#include <optional>
#include <sstream>

#include "CLI11.hpp"
#include "wsn/io.hpp"
#include "wsn/lp_format.hpp"
#include "wsn/report.hpp"
#include "wsn/solve.hpp"
#include "wsn/validate.hpp"

namespace fs = std::filesystem;
using namespace wsn;

namespace {

constexpr int kOk = 0;
constexpr int kInvalid = 1;
constexpr int kUsage = 2;
constexpr int kUncertified = 3;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct GenOptions {
  std::string out;
  std::optional<int> scenario;
  std::optional<int> periods;
  std::optional<double> period_length, comm_radius, width, height;
  std::vector<double> radii, rates;
  std::optional<std::string> sinks;
  std::vector<std::string> sink_coords;
  std::optional<double> demand_drop;
  std::optional<double> battery, activation, maintenance, receive, transmit_base, transmit_quadratic;
  std::optional<double> penalty_uncovered, penalty_activation;
  std::uint64_t seed = 0;
  // grid
  int sensor_rows = 4, sensor_cols = 4, dp_rows = 10, dp_cols = 10;
  // random
  int sensors = 16, demand_points = 100;
};

void add_gen_flags(CLI::App* cmd, GenOptions& o) {
  cmd->add_option("-o,--out", o.out, "instance JSON to write")->required();
  cmd->add_option("--scenario", o.scenario, "start from preset scenario 1 or 2")
      ->check(CLI::IsMember({1, 2}));
  cmd->add_option("--periods", o.periods, "planning horizon T")->check(CLI::PositiveNumber);
  cmd->add_option("--period-length", o.period_length, "minutes per period")->check(CLI::PositiveNumber);
  cmd->add_option("--comm-radius", o.comm_radius, "communication radius, m")->check(CLI::PositiveNumber);
  cmd->add_option("--width", o.width, "area width, m")->check(CLI::PositiveNumber);
  cmd->add_option("--height", o.height, "area height, m")->check(CLI::PositiveNumber);
  cmd->add_option("--radii", o.radii, "coverage radius per phenomenon, m")->delimiter(',');
  cmd->add_option("--rates", o.rates, "samples per minute per phenomenon")->delimiter(',');
  cmd->add_option("--sinks", o.sinks, "sink layout")->check(CLI::IsMember({"center", "corners", "coords"}));
  cmd->add_option("--sink", o.sink_coords, "sink position x,y (with --sinks coords; repeatable)");
  cmd->add_option("--demand-drop", o.demand_drop, "fraction of (point, phenomenon) demands to drop")
      ->check(CLI::Range(0.0, 1.0));
  cmd->add_option("--battery", o.battery, "EB");
  cmd->add_option("--activation-energy", o.activation, "EA");
  cmd->add_option("--maintenance-energy", o.maintenance, "EM");
  cmd->add_option("--receive-per-bit", o.receive, "receive energy per bit");
  cmd->add_option("--transmit-per-bit", o.transmit_base, "distance-independent transmit energy per bit");
  cmd->add_option("--transmit-quadratic", o.transmit_quadratic, "transmit energy per bit per m^2");
  cmd->add_option("--penalty-uncovered", o.penalty_uncovered, "EH for every (point, phenomenon)");
  cmd->add_option("--penalty-activation", o.penalty_activation, "EG for every (sensor, phenomenon)");
  cmd->add_option("--seed", o.seed, "generator seed");
}

Point2D parse_xy(const std::string& s) {
  std::istringstream in(s);
  double x = 0, y = 0;
  char comma = 0;
  if (!(in >> x >> comma >> y) || comma != ',' || !(in >> std::ws).eof()) {
    throw UsageError("sink position must look like x,y: " + s);
  }
  return {x, y};
}

ScenarioConfig gen_config(const GenOptions& o, Area& area) {
  ScenarioConfig cfg = o.scenario ? scenario_config(*o.scenario) : default_config();
  area = scenario_area(o.scenario.value_or(1));
  if (o.width) area.width = *o.width;
  if (o.height) area.height = *o.height;
  if (o.periods) cfg.periods = *o.periods;
  if (o.period_length) cfg.period_length_min = *o.period_length;
  if (o.comm_radius) cfg.comm_radius = *o.comm_radius;
  if (!o.radii.empty() || !o.rates.empty()) {
    if (o.radii.size() != o.rates.size()) throw UsageError("--radii and --rates need one entry per phenomenon");
    cfg.phenomena.clear();
    for (std::size_t g = 0; g < o.radii.size(); ++g) {
      cfg.phenomena.push_back({static_cast<int>(g), o.radii[g], o.rates[g], 16});
    }
  }
  if (o.sinks) {
    cfg.sink_layout = *o.sinks == "center" ? SinkLayout::kCenter
                      : *o.sinks == "corners" ? SinkLayout::kCorners
                                              : SinkLayout::kCoords;
  }
  if (cfg.sink_layout == SinkLayout::kCoords) {
    if (o.sink_coords.empty()) throw UsageError("--sinks coords needs at least one --sink x,y");
    for (const auto& s : o.sink_coords) cfg.sink_coords.push_back(parse_xy(s));
  } else if (!o.sink_coords.empty()) {
    throw UsageError("--sink is only valid with --sinks coords");
  }
  if (o.demand_drop) cfg.demand_drop_fraction = *o.demand_drop;
  if (o.battery) cfg.device.battery_capacity = *o.battery;
  if (o.activation) cfg.device.activation_energy = *o.activation;
  if (o.maintenance) cfg.device.maintenance_energy = *o.maintenance;
  if (o.receive) cfg.device.receive_energy_per_bit = *o.receive;
  if (o.transmit_base) cfg.device.transmit.base_per_bit = *o.transmit_base;
  if (o.transmit_quadratic) cfg.device.transmit.quadratic_per_bit = *o.transmit_quadratic;
  cfg.penalty_uncovered = o.penalty_uncovered;
  cfg.penalty_activation = o.penalty_activation;
  cfg.seed = o.seed;
  return cfg;
}

void print_metrics(const Metrics& m, const Solution& sol) {
  std::printf("objective       %s\n", format_double(m.objective).c_str());
  std::printf("real objective  %s\n", format_double(m.real_objective).c_str());
  std::printf("uncovered rate  %.4f%% (%lld of %lld)\n", 100.0 * m.uncovered_rate, m.uncovered, m.demanded_triples);
  std::printf("time            %.3f s\n", sol.wall_time_s);
  std::printf("certificate=%s\n", sol.certified ? "true" : "false");
}

void print_violations(const std::vector<Violation>& violations) {
  std::printf("%zu violation(s)\n", violations.size());
  for (const Violation& v : violations) std::printf("  %s\n", describe(v).c_str());
}

ModelOptions model_options(bool per_phenomenon) {
  ModelOptions opts;
  if (per_phenomenon) opts.fixed_energy = FixedEnergyAccounting::kPerPhenomenon;
  return opts;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Multi-period sensor activation and routing planner"};
  app.require_subcommand(1);

  // gen
  GenOptions gen;
  auto* gen_cmd = app.add_subcommand("gen", "generate an instance");
  gen_cmd->require_subcommand(1);
  auto* gen_grid_cmd = gen_cmd->add_subcommand("grid", "sensors and demand points on lattices");
  add_gen_flags(gen_grid_cmd, gen);
  gen_grid_cmd->add_option("--sensor-rows", gen.sensor_rows)->check(CLI::PositiveNumber);
  gen_grid_cmd->add_option("--sensor-cols", gen.sensor_cols)->check(CLI::PositiveNumber);
  gen_grid_cmd->add_option("--dp-rows", gen.dp_rows)->check(CLI::PositiveNumber);
  gen_grid_cmd->add_option("--dp-cols", gen.dp_cols)->check(CLI::PositiveNumber);
  auto* gen_random_cmd = gen_cmd->add_subcommand("random", "uniformly scattered sensors and demand points");
  add_gen_flags(gen_random_cmd, gen);
  gen_random_cmd->add_option("--sensors", gen.sensors)->check(CLI::PositiveNumber);
  gen_random_cmd->add_option("--demand-points", gen.demand_points)->check(CLI::PositiveNumber);

  // build
  std::string instance_path, lp_path, stats_path;
  bool per_phenomenon = false;
  auto* build_cmd = app.add_subcommand("build", "export the ILP in LP format");
  build_cmd->add_option("-i,--instance", instance_path)->required();
  build_cmd->add_option("--lp", lp_path, "LP file to write")->required();
  build_cmd->add_option("--stats", stats_path, "variable/constraint counts JSON to write");
  build_cmd->add_flag("--per-phenomenon-fixed", per_phenomenon, "charge EM and EA once per phenomenon");

  // solve
  std::string method = "heuristic", solution_out;
  SolveConfig solve_cfg;
  OracleCaps caps;
  auto* solve_cmd = app.add_subcommand("solve", "solve an instance");
  solve_cmd->add_option("-i,--instance", instance_path)->required();
  solve_cmd->add_option("-m,--method", method)->check(CLI::IsMember({"exact", "heuristic", "oracle"}));
  solve_cmd->add_option("--time-limit", solve_cfg.time_limit_s, "seconds")->check(CLI::NonNegativeNumber);
  solve_cmd->add_option("--node-limit", solve_cfg.node_limit)->check(CLI::PositiveNumber);
  solve_cmd->add_option("--gap", solve_cfg.optimality_gap, "relative optimality gap")->check(CLI::Range(0.0, 1.0));
  solve_cmd->add_option("--max-binaries", caps.max_binaries, "oracle binary cap")->check(CLI::PositiveNumber);
  solve_cmd->add_option("-o,--out", solution_out, "solution JSON to write");
  solve_cmd->add_flag("--per-phenomenon-fixed", per_phenomenon);

  // validate
  std::string solution_path, report_path;
  auto* validate_cmd = app.add_subcommand("validate", "check a solution against every constraint");
  validate_cmd->add_option("-i,--instance", instance_path)->required();
  validate_cmd->add_option("-s,--solution", solution_path, "solution JSON or name = value text")->required();
  validate_cmd->add_option("--report", report_path, "violations JSON to write");
  validate_cmd->add_flag("--per-phenomenon-fixed", per_phenomenon);

  // render
  std::string out_dir = ".", kind = "both";
  std::optional<int> period, phenomenon;
  auto* render_cmd = app.add_subcommand("render", "draw activation plans and routes as SVG");
  render_cmd->add_option("-i,--instance", instance_path)->required();
  render_cmd->add_option("-s,--solution", solution_path)->required();
  render_cmd->add_option("-t,--period", period, "period (default: all)");
  render_cmd->add_option("-g,--phenomenon", phenomenon, "phenomenon (default: all)");
  render_cmd->add_option("--kind", kind)->check(CLI::IsMember({"schedule", "routes", "both"}));
  render_cmd->add_option("-d,--out-dir", out_dir);

  // experiment
  std::string spec_path, csv_path;
  auto* exp_cmd = app.add_subcommand("experiment", "run a seeded experiment sweep");
  exp_cmd->add_option("--spec", spec_path, "experiment JSON")->required();
  exp_cmd->add_option("-o,--out", csv_path, "CSV to write")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kUsage;
  }

  try {
    if (gen_cmd->parsed()) {
      Area area;
      const ScenarioConfig cfg = gen_config(gen, area);
      Instance in;
      if (gen_grid_cmd->parsed()) {
        in = gen_grid(gen.sensor_rows, gen.sensor_cols, gen.dp_rows, gen.dp_cols, area, cfg);
      } else {
        in = gen_random(gen.sensors, gen.demand_points, area, gen.seed, cfg);
      }
      write_file_atomic(gen.out, instance_to_json(in));
      std::printf("wrote %s: %d sensors, %d demand points, %d sinks, %d phenomena, T=%d\n", gen.out.c_str(),
                  in.num_sensors(), in.num_demand_points(), in.num_sinks(), in.num_phenomena(), in.periods);
      return kOk;
    }

    if (build_cmd->parsed()) {
      const Instance in = load_instance(instance_path);
      const IlpModel model = build_model(in, build_arcs(in), model_options(per_phenomenon));
      const ModelStats stats = model_stats(model);
      const std::string lp = export_lp(model);
      const std::string stats_doc = stats_to_json(stats);
      write_file_atomic(lp_path, lp);
      if (!stats_path.empty()) write_file_atomic(stats_path, stats_doc);
      std::printf("variables %lld (binary %lld), constraints %lld\n", stats.total_variables, stats.total_binaries,
                  stats.total_constraints);
      return kOk;
    }

    if (solve_cmd->parsed()) {
      const Instance in = load_instance(instance_path);
      const ArcSets arcs = build_arcs(in);
      solve_cfg.model = model_options(per_phenomenon);
      Solution sol;
      if (method == "heuristic") {
        sol = solve_heuristic(in, arcs, solve_cfg);
      } else {
        const IlpModel model = build_model(in, arcs, solve_cfg.model);
        sol = method == "exact" ? solve_exact(in, arcs, model, solve_cfg)
                                : brute_force_oracle(in, arcs, model, caps, solve_cfg.model);
      }
      const auto violations = check_feasibility(in, arcs, sol, solve_cfg.model);
      if (!violations.empty()) {
        print_violations(violations);
        return kInvalid;
      }
      const Metrics m = compute_metrics(in, sol);
      if (!solution_out.empty()) write_file_atomic(solution_out, solution_to_json(sol, &m));
      print_metrics(m, sol);
      return method == "exact" && !sol.certified ? kUncertified : kOk;
    }

    if (validate_cmd->parsed()) {
      const Instance in = load_instance(instance_path);
      const Solution sol = load_solution(solution_path);
      const ModelOptions opts = model_options(per_phenomenon);
      std::vector<Violation> violations;
      try {
        violations = check_feasibility(in, build_arcs(in), sol, opts);
      } catch (const SolutionIndexError& e) {
        std::printf("index error: %s\n", e.what());
        return kInvalid;
      }
      if (!report_path.empty()) write_file_atomic(report_path, violations_to_json(violations));
      if (!violations.empty()) {
        print_violations(violations);
        return kInvalid;
      }
      std::printf("feasible\n");
      print_metrics(compute_metrics(in, sol), sol);
      return kOk;
    }

    if (render_cmd->parsed()) {
      const Instance in = load_instance(instance_path);
      const Solution sol = load_solution(solution_path);
      std::vector<int> ts, gs;
      if (period) {
        ts = {*period};
      } else {
        for (int t = 0; t < in.periods; ++t) ts.push_back(t);
      }
      if (phenomenon) {
        gs = {*phenomenon};
      } else {
        for (int g = 0; g < in.num_phenomena(); ++g) gs.push_back(g);
      }
      // Render everything first so a bad index leaves no files behind.
      std::vector<std::pair<fs::path, std::string>> files;
      for (int t : ts) {
        for (int g : gs) {
          const std::string stem = "_t" + std::to_string(t) + "_g" + std::to_string(g) + ".svg";
          if (kind != "routes") files.push_back({fs::path(out_dir) / ("plan" + stem), render_schedule(in, sol, t, g)});
          if (kind != "schedule") files.push_back({fs::path(out_dir) / ("routes" + stem), render_routes(in, sol, t, g)});
        }
      }
      fs::create_directories(out_dir);
      for (const auto& [path, svg] : files) {
        write_file_atomic(path, svg);
        std::printf("wrote %s\n", path.string().c_str());
      }
      return kOk;
    }

    if (exp_cmd->parsed()) {
      const ExperimentSpec spec = parse_experiment_spec(read_file(spec_path));
      const auto rows = run_experiment(spec);
      const std::string csv = experiment_csv(rows);
      write_file_atomic(csv_path, csv);
      std::printf("%-7s %-6s %14s %14s %10s %10s %3s\n", "periods", "type", "objective", "real", "uncovered",
                  "time_s", "n");
      for (const auto& r : rows) {
        std::printf("%-7d %-6s %14.4f %14.4f %9.3f%% %10.4f %3d\n", r.periods,
                    std::string(instance_type_name(r.instance_type)).c_str(), r.objective_mean,
                    r.real_objective_mean, 100.0 * r.uncovered_rate_mean, r.time_mean_s, r.n_instances);
      }
      return kOk;
    }
  } catch (const InfeasibleSolution& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kInvalid;
  } catch (const AccountingError& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kInvalid;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kUsage;
  }
  return kUsage;
}
