#pragma once

#include <cstdint>
#include <stdexcept>

#include "wsn/arcs.hpp"
#include "wsn/instance.hpp"
#include "wsn/model.hpp"
#include "wsn/solution.hpp"

namespace wsn {

struct SolveConfig {
  double time_limit_s = 60.0;
  long long node_limit = 200'000'000;
  // Prune nodes whose bound is within this relative gap of the incumbent.
  double optimality_gap = 0.0;
  std::uint64_t seed = 0;
  ModelOptions model;
};

// Depth-first branch and bound. Branches on sensing decisions (r) period by
// period, then on route arcs (z) one commodity at a time; x, h, y, w and e
// follow from those. Returns the best solution found; `certified` is set
// when the search finished within the time and node limits. The heuristic
// solution seeds the incumbent.
Solution solve_exact(const Instance& instance, const ArcSets& arcs, const IlpModel& model,
                     const SolveConfig& config = {});

// Greedy per-period cover and cheapest-path routing under residual battery.
// Always feasible: points that cannot be served are left to the penalty.
Solution solve_heuristic(const Instance& instance, const ArcSets& arcs,
                         const SolveConfig& config = {});

struct OracleCaps {
  int max_binaries = 40;
  // Bound on candidate assignments actually enumerated.
  long long max_candidates = 20'000'000;
};

class OracleCapExceeded : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Exhaustive enumeration for tiny instances, filtered by check_feasibility.
// Enumerates every r, y and per-commodity z pattern; x, h and w take their
// cheapest values for the enumerated r and y, and e is set tight. Among
// optimal assignments the one whose binary column vector is
// lexicographically smallest wins. Throws OracleCapExceeded above the caps.
Solution brute_force_oracle(const Instance& instance, const ArcSets& arcs, const IlpModel& model,
                            const OracleCaps& caps = {}, const ModelOptions& options = {});

}  // namespace wsn
