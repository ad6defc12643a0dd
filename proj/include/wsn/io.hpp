#pragma once

// JSON documents for instances, solutions, model statistics and violation
// reports, plus the file helpers every command uses.

#include <filesystem>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "wsn/instance.hpp"
#include "wsn/model.hpp"
#include "wsn/solution.hpp"
#include "wsn/validate.hpp"

namespace wsn {

inline constexpr std::string_view kInstanceFormat = "wsn-instance/1";
inline constexpr std::string_view kSolutionFormat = "wsn-solution/1";
inline constexpr std::string_view kStatsFormat = "wsn-model-stats/1";
inline constexpr std::string_view kViolationsFormat = "wsn-violations/1";

// Malformed or wrong-version document.
class FormatError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

std::string instance_to_json(const Instance& instance);
// Throws FormatError, or InstanceError when the document parses but the
// instance is invalid.
Instance parse_instance_json(std::string_view text);

// Metrics are embedded for readers; parsing ignores them. Wall time is left
// out so that repeated runs write identical files.
std::string solution_to_json(const Solution& solution, const Metrics* metrics = nullptr);
Solution parse_solution_json(std::string_view text);

std::string stats_to_json(const ModelStats& stats);
std::string violations_to_json(const std::vector<Violation>& violations);

std::string read_file(const std::filesystem::path& path);
// Writes to a sibling temporary and renames it over `path`.
void write_file_atomic(const std::filesystem::path& path, std::string_view content);

Instance load_instance(const std::filesystem::path& path);
// Accepts a solution JSON document or external "name = value" text.
Solution load_solution(const std::filesystem::path& path);

}  // namespace wsn
