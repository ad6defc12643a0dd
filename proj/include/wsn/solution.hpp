#pragma once

#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "wsn/model.hpp"

namespace wsn {

enum class Provenance { kExact, kHeuristic, kOracle, kExternal };

std::string_view provenance_name(Provenance p);
Provenance parse_provenance(std::string_view name);

// Sparse assignment: variables absent from `values` are zero.
struct Solution {
  std::map<VarRef, double> values;
  Provenance provenance = Provenance::kExternal;
  double wall_time_s = 0.0;
  // Set by the exact search when it proved optimality within its limits.
  bool certified = false;

  double value(const VarRef& v) const {
    const auto it = values.find(v);
    return it == values.end() ? 0.0 : it->second;
  }
  void set(const VarRef& v, double value) {
    if (value == 0.0) {
      values.erase(v);
    } else {
      values[v] = value;
    }
  }
  bool on(const VarRef& v) const { return value(v) != 0.0; }

  friend bool operator==(const Solution&, const Solution&) = default;
};

// Dense column vector in the model's order. Throws std::out_of_range if the
// solution sets a variable the model does not declare.
std::vector<double> to_columns(const IlpModel& model, const Solution& solution);
Solution from_columns(const IlpModel& model, const std::vector<double>& columns,
                      Provenance provenance);

// External solver output: one "name = value" (or "name value") per line,
// blank lines and lines starting with '#' or '\' ignored.
Solution parse_solution_text(std::string_view text);

}  // namespace wsn
