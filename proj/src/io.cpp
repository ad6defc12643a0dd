#include "wsn/io.hpp"

#include <fstream>
#include <sstream>
#include <system_error>

#include <unistd.h>

#include "json.hpp"

namespace wsn {

using nlohmann::json;

namespace {

[[noreturn]] void bad(const std::string& what) { throw FormatError(what); }

json point_json(const Point2D& p) { return json::array({p.x, p.y}); }

Point2D parse_point(const json& j) {
  if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number()) {
    bad("a point must be a two-number array");
  }
  return {j[0].get<double>(), j[1].get<double>()};
}

template <class T>
T field(const json& obj, const char* key) {
  if (!obj.is_object() || !obj.contains(key)) bad(std::string("missing field \"") + key + "\"");
  try {
    return obj.at(key).get<T>();
  } catch (const json::exception&) {
    bad(std::string("field \"") + key + "\" has the wrong type");
  }
}

template <class T>
T field_or(const json& obj, const char* key, T fallback) {
  return obj.contains(key) ? field<T>(obj, key) : fallback;
}

// Uniform tables collapse to one number; otherwise one row per entity.
json table_json(const std::vector<double>& flat, int rows, int cols) {
  bool uniform = true;
  for (double v : flat) uniform = uniform && v == flat.front();
  if (uniform && !flat.empty()) return flat.front();
  json out = json::array();
  for (int r = 0; r < rows; ++r) {
    json row = json::array();
    for (int c = 0; c < cols; ++c) row.push_back(flat[static_cast<std::size_t>(r) * cols + c]);
    out.push_back(std::move(row));
  }
  return out;
}

std::vector<double> parse_table(const json& j, int rows, int cols, const char* what) {
  if (j.is_number()) return std::vector<double>(static_cast<std::size_t>(rows) * cols, j.get<double>());
  if (!j.is_array() || static_cast<int>(j.size()) != rows) bad(std::string(what) + " table has the wrong shape");
  std::vector<double> flat;
  flat.reserve(static_cast<std::size_t>(rows) * cols);
  for (const json& row : j) {
    if (!row.is_array() || static_cast<int>(row.size()) != cols) {
      bad(std::string(what) + " table has the wrong shape");
    }
    for (const json& v : row) {
      if (!v.is_number()) bad(std::string(what) + " table holds a non-number");
      flat.push_back(v.get<double>());
    }
  }
  return flat;
}

json parse_document(std::string_view text, std::string_view format) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    bad(std::string("invalid JSON: ") + e.what());
  }
  if (!doc.is_object()) bad("document must be a JSON object");
  const auto version = field<std::string>(doc, "format");
  if (version != format) bad("expected format \"" + std::string(format) + "\", got \"" + version + "\"");
  return doc;
}

}  // namespace

std::string instance_to_json(const Instance& in) {
  const int G = in.num_phenomena();
  json doc;
  doc["format"] = kInstanceFormat;
  doc["area"] = {{"width_m", in.area.width}, {"height_m", in.area.height}};
  doc["sensors"] = json::array();
  for (const Point2D& p : in.sensors) doc["sensors"].push_back(point_json(p));
  doc["demand_points"] = json::array();
  for (const DemandPoint& dp : in.demand_points) {
    doc["demand_points"].push_back({{"position", point_json(dp.position)}, {"demands", dp.demands}});
  }
  doc["sinks"] = json::array();
  for (const Point2D& p : in.sinks) doc["sinks"].push_back(point_json(p));
  doc["phenomena"] = json::array();
  for (const Phenomenon& ph : in.phenomena) {
    doc["phenomena"].push_back({{"coverage_radius_m", ph.coverage_radius},
                                {"sampling_rate_per_min", ph.sampling_rate},
                                {"bits_per_sample", ph.bits_per_sample}});
  }
  doc["periods"] = in.periods;
  doc["period_length_min"] = in.period_length_min;
  doc["comm_radius_m"] = in.comm_radius;
  const DeviceProfile& d = in.device;
  doc["device"] = {{"battery_capacity", d.battery_capacity},
                   {"activation_energy", d.activation_energy},
                   {"maintenance_energy", d.maintenance_energy},
                   {"receive_energy_per_bit", d.receive_energy_per_bit},
                   {"transmit_base_per_bit", d.transmit.base_per_bit},
                   {"transmit_quadratic_per_bit", d.transmit.quadratic_per_bit},
                   {"bit_rate", d.bit_rate}};
  doc["penalties"] = {{"uncovered", table_json(in.penalties.uncovered, in.num_demand_points(), G)},
                      {"activation", table_json(in.penalties.activation, in.num_sensors(), G)}};
  doc["seed"] = in.seed;
  return doc.dump(2) + "\n";
}

Instance parse_instance_json(std::string_view text) {
  const json doc = parse_document(text, kInstanceFormat);
  Instance in;
  const json area = field<json>(doc, "area");
  in.area = {field<double>(area, "width_m"), field<double>(area, "height_m")};
  for (const json& p : field<json>(doc, "sensors")) in.sensors.push_back(parse_point(p));
  for (const json& dp : field<json>(doc, "demand_points")) {
    in.demand_points.push_back({parse_point(field<json>(dp, "position")), field<std::vector<int>>(dp, "demands")});
  }
  for (const json& p : field<json>(doc, "sinks")) in.sinks.push_back(parse_point(p));
  int id = 0;
  for (const json& ph : field<json>(doc, "phenomena")) {
    in.phenomena.push_back({id++, field<double>(ph, "coverage_radius_m"), field<double>(ph, "sampling_rate_per_min"),
                            field_or<int>(ph, "bits_per_sample", 16)});
  }
  in.periods = field<int>(doc, "periods");
  in.period_length_min = field<double>(doc, "period_length_min");
  in.comm_radius = field<double>(doc, "comm_radius_m");
  const json dev = field<json>(doc, "device");
  in.device.battery_capacity = field<double>(dev, "battery_capacity");
  in.device.activation_energy = field<double>(dev, "activation_energy");
  in.device.maintenance_energy = field<double>(dev, "maintenance_energy");
  in.device.receive_energy_per_bit = field<double>(dev, "receive_energy_per_bit");
  in.device.transmit.base_per_bit = field<double>(dev, "transmit_base_per_bit");
  in.device.transmit.quadratic_per_bit = field_or<double>(dev, "transmit_quadratic_per_bit", 0.0);
  in.device.bit_rate = field_or<double>(dev, "bit_rate", 250000.0);
  const json pen = field<json>(doc, "penalties");
  const int G = in.num_phenomena();
  in.penalties.uncovered = parse_table(field<json>(pen, "uncovered"), in.num_demand_points(), G, "uncovered penalty");
  in.penalties.activation = parse_table(field<json>(pen, "activation"), in.num_sensors(), G, "activation penalty");
  in.seed = field_or<std::uint64_t>(doc, "seed", 0);
  validate_instance(in);
  return in;
}

std::string solution_to_json(const Solution& sol, const Metrics* metrics) {
  json doc;
  doc["format"] = kSolutionFormat;
  doc["provenance"] = provenance_name(sol.provenance);
  doc["certified"] = sol.certified;
  json values = json::object();
  for (const auto& [ref, v] : sol.values) values[var_name(ref)] = v;
  doc["values"] = std::move(values);
  if (metrics) {
    doc["metrics"] = {{"objective", metrics->objective},
                      {"real_objective", metrics->real_objective},
                      {"penalty_total", metrics->penalty_total},
                      {"uncovered_rate", metrics->uncovered_rate},
                      {"uncovered", metrics->uncovered},
                      {"demanded_triples", metrics->demanded_triples},
                      {"activations", metrics->activations},
                      {"per_sensor_energy", metrics->per_sensor_energy}};
  }
  return doc.dump(2) + "\n";
}

Solution parse_solution_json(std::string_view text) {
  const json doc = parse_document(text, kSolutionFormat);
  Solution sol;
  try {
    sol.provenance = parse_provenance(field<std::string>(doc, "provenance"));
  } catch (const std::invalid_argument& e) {
    bad(e.what());
  }
  sol.certified = field_or<bool>(doc, "certified", false);
  sol.wall_time_s = field_or<double>(doc, "wall_time_s", 0.0);
  const json values = field<json>(doc, "values");
  if (!values.is_object()) bad("\"values\" must be an object");
  for (const auto& [name, v] : values.items()) {
    const auto ref = parse_var_name(name);
    if (!ref) bad("unknown variable name \"" + name + "\"");
    if (!v.is_number()) bad("value of " + name + " is not a number");
    sol.set(*ref, v.get<double>());
  }
  return sol;
}

std::string stats_to_json(const ModelStats& stats) {
  json doc;
  doc["format"] = kStatsFormat;
  doc["variables"] = stats.variables;
  doc["constraints"] = stats.constraints;
  doc["total_variables"] = stats.total_variables;
  doc["total_binaries"] = stats.total_binaries;
  doc["total_constraints"] = stats.total_constraints;
  return doc.dump(2) + "\n";
}

std::string violations_to_json(const std::vector<Violation>& violations) {
  json doc;
  doc["format"] = kViolationsFormat;
  doc["count"] = violations.size();
  json list = json::array();
  for (const Violation& v : violations) {
    list.push_back({{"family", family_name(v.tag.family)},
                    {"indices", v.tag.idx},
                    {"lhs", v.lhs},
                    {"sense", sense_symbol(v.sense)},
                    {"rhs", v.rhs},
                    {"slack", v.slack},
                    {"detail", v.detail}});
  }
  doc["violations"] = std::move(list);
  return doc.dump(2) + "\n";
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read " + path.string());
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

void write_file_atomic(const std::filesystem::path& path, std::string_view content) {
  std::filesystem::path tmp = path;
  tmp += ".tmp." + std::to_string(::getpid());
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot write " + tmp.string());
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    out.flush();
    if (!out) {
      out.close();
      std::error_code ec;
      std::filesystem::remove(tmp, ec);
      throw std::runtime_error("failed writing " + tmp.string());
    }
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) {
    std::filesystem::remove(tmp, ec);
    throw std::runtime_error("cannot move output into place at " + path.string());
  }
}

Instance load_instance(const std::filesystem::path& path) { return parse_instance_json(read_file(path)); }

Solution load_solution(const std::filesystem::path& path) {
  const std::string text = read_file(path);
  const auto first = text.find_first_not_of(" \t\r\n");
  if (first != std::string::npos && text[first] == '{') return parse_solution_json(text);
  return parse_solution_text(text);
}

}  // namespace wsn
