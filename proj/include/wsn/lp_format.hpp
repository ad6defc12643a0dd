#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

#include "wsn/model.hpp"

namespace wsn {

// Writes the model in the CPLEX-style LP text format: Minimize, Subject To,
// Bounds, Binaries, End. Every variable appears in Bounds, in column order,
// so parse_lp can restore the column layout. Output is byte-deterministic.
std::string export_lp(const IlpModel& model);

class LpParseError : public std::runtime_error {
 public:
  LpParseError(int line, int column, const std::string& what);
  int line() const { return line_; }
  int column() const { return column_; }

 private:
  int line_;
  int column_;
};

// Reads the subset of the LP format that export_lp writes. Variables and row
// names must use the var_name / tag_name encodings. Variables not listed in
// Bounds get [0, +inf) and follow the listed ones in order of appearance.
IlpModel parse_lp(std::string_view text);

// Shortest decimal string that parses back to the same double.
std::string format_double(double v);

}  // namespace wsn
