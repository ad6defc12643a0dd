#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "wsn/instance.hpp"
#include "wsn/solution.hpp"
#include "wsn/solve.hpp"

namespace wsn {

// SVG snapshot of period t for phenomenon g. Demand points are dots (filled
// when covered, hollow when h = 1, small gray when they do not demand g);
// sensors are squares (black when sensing g, gray when on for other work,
// white when off); sensing sensors get a coverage circle; sinks are
// triangles. Throws std::out_of_range for t or g outside the instance.
std::string render_schedule(const Instance& instance, const Solution& solution, int t, int g);

// SVG of every z arc with value 1 for (., t, g), one hue per source sensor.
// Each edge carries data-source, data-from and data-to attributes; sink
// heads are written as "m<index>".
std::string render_routes(const Instance& instance, const Solution& solution, int t, int g);

enum class InstanceType { kGrid, kRandom };
std::string_view instance_type_name(InstanceType type);

struct ExperimentRow {
  int periods = 0;
  InstanceType instance_type = InstanceType::kGrid;
  double objective_mean = 0.0, objective_std = 0.0;
  double real_objective_mean = 0.0, real_objective_std = 0.0;
  double uncovered_rate_mean = 0.0, uncovered_rate_std = 0.0;
  double time_mean_s = 0.0, time_std_s = 0.0;
  int n_instances = 0;
  friend bool operator==(const ExperimentRow&, const ExperimentRow&) = default;
};

enum class SolverKind { kExact, kHeuristic, kOracle };
SolverKind parse_solver_kind(std::string_view name);

inline constexpr std::string_view kExperimentFormat = "wsn-experiment/1";

// One grid cell (a single instance) and one random cell (one instance per
// seed) for every period count, on a preset scenario.
struct ExperimentSpec {
  int scenario = 1;
  std::vector<int> periods{1, 2, 3};
  std::vector<InstanceType> types{InstanceType::kGrid, InstanceType::kRandom};
  std::vector<std::uint64_t> seeds{0, 1, 2, 3, 4, 5, 6, 7, 8, 9};
  SolverKind solver = SolverKind::kHeuristic;
  SolveConfig solve;
  OracleCaps oracle_caps;
  // 0 uses the OpenMP default; 1 runs every cell on the calling thread.
  int threads = 0;
};

// Throws FormatError on a malformed document.
ExperimentSpec parse_experiment_spec(std::string_view text);

// The accounting identity did not hold for some run.
class AccountingError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

// Generates, solves, validates and evaluates every run, then aggregates per
// (periods, type) with the population standard deviation. Rows come out
// ordered by periods, then type. Throws InfeasibleSolution (naming the run)
// if any solver output fails validation, and AccountingError if objective
// minus real objective differs from the penalty total.
std::vector<ExperimentRow> run_experiment(const ExperimentSpec& spec);

inline constexpr std::string_view kExperimentCsvHeader =
    "periods,type,objective_mean,objective_std,real_objective_mean,real_objective_std,"
    "uncovered_rate_mean,uncovered_rate_std,time_mean_s,time_std_s,n";

// Numbers are written in shortest round-trip form, so parsing gives back
// equal rows.
std::string experiment_csv(const std::vector<ExperimentRow>& rows);
// Throws std::invalid_argument on a malformed table.
std::vector<ExperimentRow> parse_experiment_csv(std::string_view text);

}  // namespace wsn
