#include "wsn/solution.hpp"

#include <charconv>
#include <sstream>
#include <stdexcept>

namespace wsn {

std::string_view provenance_name(Provenance p) {
  switch (p) {
    case Provenance::kExact: return "exact";
    case Provenance::kHeuristic: return "heuristic";
    case Provenance::kOracle: return "oracle";
    case Provenance::kExternal: return "external";
  }
  return "external";
}

Provenance parse_provenance(std::string_view name) {
  if (name == "exact") return Provenance::kExact;
  if (name == "heuristic") return Provenance::kHeuristic;
  if (name == "oracle") return Provenance::kOracle;
  if (name == "external") return Provenance::kExternal;
  throw std::invalid_argument("unknown provenance '" + std::string(name) + "'");
}

std::vector<double> to_columns(const IlpModel& model, const Solution& solution) {
  std::vector<double> cols(model.variables().size(), 0.0);
  for (const auto& [ref, v] : solution.values) cols[model.column(ref)] = v;
  return cols;
}

Solution from_columns(const IlpModel& model, const std::vector<double>& columns,
                      Provenance provenance) {
  if (columns.size() != model.variables().size()) {
    throw std::invalid_argument("column vector length does not match the model");
  }
  Solution s;
  s.provenance = provenance;
  for (std::size_t k = 0; k < columns.size(); ++k) s.set(model.variables()[k].ref, columns[k]);
  return s;
}

Solution parse_solution_text(std::string_view text) {
  Solution s;
  s.provenance = Provenance::kExternal;
  std::istringstream in{std::string(text)};
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    for (char& c : line) {
      if (c == '=' || c == '\t' || c == '\r') c = ' ';
    }
    std::istringstream row(line);
    std::string name;
    std::string value;
    if (!(row >> name) || name[0] == '#' || name[0] == '\\') continue;
    std::string extra;
    if (!(row >> value) || (row >> extra)) {
      throw std::invalid_argument("line " + std::to_string(lineno) + ": expected 'name = value'");
    }
    const auto ref = parse_var_name(name);
    if (!ref) {
      throw std::invalid_argument("line " + std::to_string(lineno) + ": unknown variable '" + name + "'");
    }
    double v = 0.0;
    const auto res = std::from_chars(value.data(), value.data() + value.size(), v);
    if (res.ec != std::errc() || res.ptr != value.data() + value.size()) {
      throw std::invalid_argument("line " + std::to_string(lineno) + ": bad value '" + value + "'");
    }
    s.set(*ref, v);
  }
  return s;
}

}  // namespace wsn
