#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace wsn {

struct Point2D {
  double x = 0.0;
  double y = 0.0;
  friend bool operator==(const Point2D&, const Point2D&) = default;
};

double distance(const Point2D& a, const Point2D& b);

struct Area {
  double width = 0.0;
  double height = 0.0;
  bool contains(const Point2D& p) const {
    return p.x >= 0.0 && p.x <= width && p.y >= 0.0 && p.y <= height;
  }
  friend bool operator==(const Area&, const Area&) = default;
};

// A sensed quantity. `id` is the phenomenon's position in Instance::phenomena.
struct Phenomenon {
  int id = 0;
  double coverage_radius = 0.0;  // meters
  double sampling_rate = 0.0;    // samples per minute
  int bits_per_sample = 16;
  friend bool operator==(const Phenomenon&, const Phenomenon&) = default;
};

// Per-bit transmit cost as a function of hop length:
//   energy_per_bit(d) = base_per_bit + quadratic_per_bit * d^2
// quadratic_per_bit == 0 gives the constant-power radio.
struct TransmitModel {
  double base_per_bit = 0.0;
  double quadratic_per_bit = 0.0;
  double energy_per_bit(double distance_m) const {
    return base_per_bit + quadratic_per_bit * distance_m * distance_m;
  }
  friend bool operator==(const TransmitModel&, const TransmitModel&) = default;
};

struct DeviceProfile {
  double battery_capacity = 0.0;    // EB
  double activation_energy = 0.0;   // EA, charged on an off->on transition
  double maintenance_energy = 0.0;  // EM, charged per active period
  double receive_energy_per_bit = 0.0;
  TransmitModel transmit;
  double bit_rate = 250000.0;  // bits per second
  friend bool operator==(const DeviceProfile&, const DeviceProfile&) = default;
};

struct DemandPoint {
  Point2D position;
  std::vector<int> demands;  // sorted phenomenon ids
  bool demands_phenomenon(int g) const;
  friend bool operator==(const DemandPoint&, const DemandPoint&) = default;
};

// EH is indexed (demand point, phenomenon) and EG (sensor, phenomenon); both
// are constant over periods. Row-major: uncovered[j * G + g].
struct Penalties {
  std::vector<double> uncovered;
  std::vector<double> activation;
  friend bool operator==(const Penalties&, const Penalties&) = default;
};

struct Instance {
  Area area;
  std::vector<Point2D> sensors;
  std::vector<DemandPoint> demand_points;
  std::vector<Point2D> sinks;
  std::vector<Phenomenon> phenomena;
  int periods = 1;
  double period_length_min = 60.0;
  double comm_radius = 0.0;
  DeviceProfile device;
  Penalties penalties;
  std::uint64_t seed = 0;

  int num_sensors() const { return static_cast<int>(sensors.size()); }
  int num_demand_points() const { return static_cast<int>(demand_points.size()); }
  int num_sinks() const { return static_cast<int>(sinks.size()); }
  int num_phenomena() const { return static_cast<int>(phenomena.size()); }

  double uncovered_penalty(int j, int g) const {
    return penalties.uncovered[static_cast<std::size_t>(j) * phenomena.size() + g];
  }
  double activation_penalty(int i, int g) const {
    return penalties.activation[static_cast<std::size_t>(i) * phenomena.size() + g];
  }

  friend bool operator==(const Instance&, const Instance&) = default;
};

class InstanceError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Throws InstanceError describing the first broken invariant.
void validate_instance(const Instance& instance);

// Upper bound on what one sensor can draw in one period: sensing, activation,
// and carrying every sensor's data for every phenomenon over its costliest
// outgoing hop. The uncovered-demand penalty must exceed it.
double max_period_draw(const Instance& instance);

enum class SinkLayout { kCenter, kCorners, kCoords };

// Scenario parameters shared by both generators. Penalty fields left unset
// are filled from the defaults below once the geometry is known.
struct ScenarioConfig {
  std::vector<Phenomenon> phenomena;
  int periods = 1;
  double period_length_min = 60.0;
  double comm_radius = 11.0;
  DeviceProfile device;
  SinkLayout sink_layout = SinkLayout::kCenter;
  std::vector<Point2D> sink_coords;
  // Fraction of (demand point, phenomenon) pairs randomly dropped. Each point
  // keeps at least one phenomenon.
  double demand_drop_fraction = 0.0;
  // Inset of the outermost lattice rows/columns from the area border.
  double grid_margin = 0.0;
  std::optional<double> penalty_uncovered;
  std::optional<double> penalty_activation;
  std::uint64_t seed = 0;
};

// Defaults: one period of sensing costs about 1.0 energy units.
DeviceProfile default_device();
// Two phenomena: 8.8 m at 2 samples/min and 16 m at 1 sample/min.
std::vector<Phenomenon> default_phenomena();
ScenarioConfig default_config();

inline constexpr double kDefaultActivationPenalty = 0.01;
inline constexpr double kUncoveredPenaltyFactor = 1.0e4;

// 16 sensors, 100 demand points, 10 m x 10 m, one central sink.
ScenarioConfig scenario_config(int scenario);
Area scenario_area(int scenario);

Instance gen_grid(int sensor_rows, int sensor_cols, int dp_rows, int dp_cols,
                  Area area, const ScenarioConfig& config);

Instance gen_random(int n_sensors, int n_demand_points, Area area,
                    std::uint64_t seed, const ScenarioConfig& config);

// Scenario 1 is the single-sink 10x10 field; scenario 2 is a sparser 30x30
// field with a sink in each corner, which forces multi-hop routes.
Instance scenario_grid(int scenario, int periods);
Instance scenario_random(int scenario, int periods, std::uint64_t seed);

}  // namespace wsn
