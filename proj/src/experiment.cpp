#include <charconv>
#include <cmath>
#include <exception>
#include <sstream>

#include <omp.h>

#include "json.hpp"
#include "wsn/io.hpp"
#include "wsn/lp_format.hpp"
#include "wsn/report.hpp"
#include "wsn/validate.hpp"

namespace wsn {

namespace {

using nlohmann::json;

struct Job {
  InstanceType type;
  int periods;
  std::uint64_t seed;
};

struct Outcome {
  double objective = 0.0;
  double real_objective = 0.0;
  double uncovered_rate = 0.0;
  double time_s = 0.0;
};

std::string job_label(const Job& job) {
  std::string s = std::string(instance_type_name(job.type)) + " T=" + std::to_string(job.periods);
  if (job.type == InstanceType::kRandom) s += " seed=" + std::to_string(job.seed);
  return s;
}

Outcome run_job(const ExperimentSpec& spec, const Job& job) {
  const Instance in = job.type == InstanceType::kGrid ? scenario_grid(spec.scenario, job.periods)
                                                       : scenario_random(spec.scenario, job.periods, job.seed);
  const ArcSets arcs = build_arcs(in);
  Solution sol;
  switch (spec.solver) {
    case SolverKind::kHeuristic:
      sol = solve_heuristic(in, arcs, spec.solve);
      break;
    case SolverKind::kExact:
      sol = solve_exact(in, arcs, build_model(in, arcs, spec.solve.model), spec.solve);
      break;
    case SolverKind::kOracle:
      sol = brute_force_oracle(in, arcs, build_model(in, arcs, spec.solve.model), spec.oracle_caps, spec.solve.model);
      break;
  }
  auto violations = check_feasibility(in, arcs, sol, spec.solve.model);
  if (!violations.empty()) {
    throw InfeasibleSolution(std::move(violations), job_label(job));
  }
  const Metrics m = compute_metrics(in, sol);
  const double gap = m.objective - m.real_objective - m.penalty_total;
  if (std::abs(gap) > 1e-12 * std::max(1.0, std::abs(m.objective))) {
    throw AccountingError(job_label(job) + ": objective - real objective differs from the penalty total by " +
                          format_double(gap));
  }
  if (m.penalty_total == 0.0 && m.objective != m.real_objective) {
    throw AccountingError(job_label(job) + ": penalty-free run has objective != real objective");
  }
  return {m.objective, m.real_objective, m.uncovered_rate, sol.wall_time_s};
}

// Population mean and standard deviation; identical samples give exactly
// their value and zero.
std::pair<double, double> mean_std(const std::vector<double>& xs) {
  if (std::all_of(xs.begin(), xs.end(), [&](double x) { return x == xs.front(); })) return {xs.front(), 0.0};
  double sum = 0.0;
  for (double x : xs) sum += x;
  const double mean = sum / static_cast<double>(xs.size());
  double sq = 0.0;
  for (double x : xs) sq += (x - mean) * (x - mean);
  return {mean, std::sqrt(sq / static_cast<double>(xs.size()))};
}

double parse_number(std::string_view field) {
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), v);
  if (ec != std::errc() || ptr != field.data() + field.size()) {
    throw std::invalid_argument("not a number: \"" + std::string(field) + "\"");
  }
  return v;
}

int parse_int(std::string_view field) {
  int v = 0;
  const auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), v);
  if (ec != std::errc() || ptr != field.data() + field.size()) {
    throw std::invalid_argument("not an integer: \"" + std::string(field) + "\"");
  }
  return v;
}

}  // namespace

std::string_view instance_type_name(InstanceType type) {
  return type == InstanceType::kGrid ? "grid" : "random";
}

SolverKind parse_solver_kind(std::string_view name) {
  if (name == "exact") return SolverKind::kExact;
  if (name == "heuristic") return SolverKind::kHeuristic;
  if (name == "oracle") return SolverKind::kOracle;
  throw std::invalid_argument("unknown solver \"" + std::string(name) + "\"");
}

ExperimentSpec parse_experiment_spec(std::string_view text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw FormatError(std::string("invalid JSON: ") + e.what());
  }
  ExperimentSpec spec;
  try {
    if (!doc.is_object() || doc.value("format", std::string()) != kExperimentFormat) {
      throw FormatError("expected format \"" + std::string(kExperimentFormat) + "\"");
    }
    spec.scenario = doc.value("scenario", spec.scenario);
    if (spec.scenario != 1 && spec.scenario != 2) throw FormatError("scenario must be 1 or 2");
    spec.periods = doc.value("periods", spec.periods);
    for (int t : spec.periods) {
      if (t < 1) throw FormatError("period counts must be >= 1");
    }
    if (doc.contains("types")) {
      spec.types.clear();
      for (const auto& name : doc["types"].get<std::vector<std::string>>()) {
        if (name == "grid") {
          spec.types.push_back(InstanceType::kGrid);
        } else if (name == "random") {
          spec.types.push_back(InstanceType::kRandom);
        } else {
          throw FormatError("unknown instance type \"" + name + "\"");
        }
      }
    }
    spec.seeds = doc.value("seeds", spec.seeds);
    if (spec.seeds.empty()) throw FormatError("seeds must not be empty");
    spec.solver = parse_solver_kind(doc.value("solver", std::string("heuristic")));
    spec.solve.time_limit_s = doc.value("time_limit_s", spec.solve.time_limit_s);
    spec.solve.node_limit = doc.value("node_limit", spec.solve.node_limit);
    spec.oracle_caps.max_binaries = doc.value("oracle_max_binaries", spec.oracle_caps.max_binaries);
    spec.threads = doc.value("threads", spec.threads);
  } catch (const json::exception& e) {
    throw FormatError(std::string("malformed experiment spec: ") + e.what());
  } catch (const std::invalid_argument& e) {
    throw FormatError(e.what());
  }
  return spec;
}

std::vector<ExperimentRow> run_experiment(const ExperimentSpec& spec) {
  std::vector<Job> jobs;
  std::vector<std::pair<std::size_t, std::size_t>> cells;  // [begin, end) into jobs
  for (int T : spec.periods) {
    for (InstanceType type : spec.types) {
      const std::size_t begin = jobs.size();
      if (type == InstanceType::kGrid) {
        jobs.push_back({type, T, 0});
      } else {
        for (std::uint64_t s : spec.seeds) jobs.push_back({type, T, s});
      }
      cells.push_back({begin, jobs.size()});
    }
  }

  std::vector<Outcome> outcomes(jobs.size());
  std::vector<std::exception_ptr> errors(jobs.size());
  const int n = static_cast<int>(jobs.size());
  const int threads = spec.threads > 0 ? spec.threads : omp_get_max_threads();
#pragma omp parallel for schedule(dynamic) num_threads(threads)
  for (int k = 0; k < n; ++k) {
    try {
      outcomes[k] = run_job(spec, jobs[k]);
    } catch (...) {
      errors[k] = std::current_exception();
    }
  }
  for (int k = 0; k < n; ++k) {
    if (errors[k]) std::rethrow_exception(errors[k]);
  }

  std::vector<ExperimentRow> rows;
  for (const auto& [begin, end] : cells) {
    std::vector<double> obj, real, unc, time;
    for (std::size_t k = begin; k < end; ++k) {
      obj.push_back(outcomes[k].objective);
      real.push_back(outcomes[k].real_objective);
      unc.push_back(outcomes[k].uncovered_rate);
      time.push_back(outcomes[k].time_s);
    }
    ExperimentRow row;
    row.periods = jobs[begin].periods;
    row.instance_type = jobs[begin].type;
    std::tie(row.objective_mean, row.objective_std) = mean_std(obj);
    std::tie(row.real_objective_mean, row.real_objective_std) = mean_std(real);
    std::tie(row.uncovered_rate_mean, row.uncovered_rate_std) = mean_std(unc);
    std::tie(row.time_mean_s, row.time_std_s) = mean_std(time);
    row.n_instances = static_cast<int>(end - begin);
    rows.push_back(row);
  }
  return rows;
}

std::string experiment_csv(const std::vector<ExperimentRow>& rows) {
  std::string out(kExperimentCsvHeader);
  out += "\n";
  for (const ExperimentRow& r : rows) {
    out += std::to_string(r.periods) + "," + std::string(instance_type_name(r.instance_type));
    for (double v : {r.objective_mean, r.objective_std, r.real_objective_mean, r.real_objective_std,
                     r.uncovered_rate_mean, r.uncovered_rate_std, r.time_mean_s, r.time_std_s}) {
      out += "," + format_double(v);
    }
    out += "," + std::to_string(r.n_instances) + "\n";
  }
  return out;
}

std::vector<ExperimentRow> parse_experiment_csv(std::string_view text) {
  std::istringstream in{std::string(text)};
  std::string line;
  if (!std::getline(in, line) || line != kExperimentCsvHeader) {
    throw std::invalid_argument("experiment CSV must start with the standard header");
  }
  std::vector<ExperimentRow> rows;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::vector<std::string_view> f;
    std::string_view rest = line;
    for (;;) {
      const auto comma = rest.find(',');
      f.push_back(rest.substr(0, comma));
      if (comma == std::string_view::npos) break;
      rest.remove_prefix(comma + 1);
    }
    if (f.size() != 11) throw std::invalid_argument("experiment CSV row needs 11 fields: " + line);
    ExperimentRow r;
    r.periods = parse_int(f[0]);
    if (f[1] == "grid") {
      r.instance_type = InstanceType::kGrid;
    } else if (f[1] == "random") {
      r.instance_type = InstanceType::kRandom;
    } else {
      throw std::invalid_argument("unknown instance type in CSV: " + std::string(f[1]));
    }
    double* slots[] = {&r.objective_mean,      &r.objective_std,      &r.real_objective_mean,
                       &r.real_objective_std,  &r.uncovered_rate_mean, &r.uncovered_rate_std,
                       &r.time_mean_s,         &r.time_std_s};
    for (int k = 0; k < 8; ++k) *slots[k] = parse_number(f[2 + k]);
    r.n_instances = parse_int(f[10]);
    rows.push_back(r);
  }
  return rows;
}

}  // namespace wsn
