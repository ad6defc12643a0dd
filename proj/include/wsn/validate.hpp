#pragma once

#include <stdexcept>
#include <string>
#include <vector>

#include "wsn/arcs.hpp"
#include "wsn/instance.hpp"
#include "wsn/model.hpp"
#include "wsn/solution.hpp"

namespace wsn {

inline constexpr double kContinuousTolerance = 1e-6;

struct Violation {
  ConstraintTag tag;
  double lhs = 0.0;
  Sense sense = Sense::kLe;
  double rhs = 0.0;
  double slack = 0.0;  // negative
  std::string detail;  // row or variable name
};

// The solution names a variable outside the instance's index space (a
// coverage variable without an arc, a route on a missing link, ...).
class SolutionIndexError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Recomputes every constraint row from the instance geometry, without using
// the model builder. Rows over binaries are compared exactly; the battery
// rows use kContinuousTolerance. Also checks integrality, the e bounds, and
// that each sensing sensor's data reaches a sink over active sensors.
std::vector<Violation> check_feasibility(const Instance& instance, const ArcSets& arcs,
                                         const Solution& solution,
                                         const ModelOptions& options = {});

struct Metrics {
  double objective = 0.0;
  double real_objective = 0.0;  // sum of e_i
  double penalty_total = 0.0;   // EH and EG terms
  double uncovered_rate = 0.0;
  long long uncovered = 0;
  long long demanded_triples = 0;
  std::vector<double> per_sensor_energy;
  long long activations = 0;  // number of w = 1
};

class InfeasibleSolution : public std::runtime_error {
 public:
  explicit InfeasibleSolution(std::vector<Violation> violations, const std::string& context = {});
  const std::vector<Violation>& violations() const { return violations_; }

 private:
  std::vector<Violation> violations_;
};

// Throws InfeasibleSolution unless check_feasibility comes back empty.
Metrics evaluate(const Instance& instance, const Solution& solution, const ModelOptions& options = {});

// Metrics without the feasibility gate, for callers that already checked.
Metrics compute_metrics(const Instance& instance, const Solution& solution);

std::string describe(const Violation& v);

}  // namespace wsn
