#include "wsn/instance.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>

#include "wsn/energy.hpp"

namespace wsn {

double distance(const Point2D& a, const Point2D& b) {
  const double dx = a.x - b.x;
  const double dy = a.y - b.y;
  return std::sqrt(dx * dx + dy * dy);
}

bool DemandPoint::demands_phenomenon(int g) const {
  return std::binary_search(demands.begin(), demands.end(), g);
}

namespace {

[[noreturn]] void fail(const std::string& what) { throw InstanceError(what); }

bool finite(const Point2D& p) { return std::isfinite(p.x) && std::isfinite(p.y); }

void check_position(const Instance& in, const Point2D& p, const char* kind, int idx) {
  if (!finite(p) || !in.area.contains(p)) {
    std::ostringstream os;
    os << kind << " " << idx << " at (" << p.x << ", " << p.y << ") lies outside the "
       << in.area.width << " x " << in.area.height << " area";
    fail(os.str());
  }
}

// Uniform double in [0, 1) from the top 53 bits; portable across standard
// libraries, unlike std::uniform_real_distribution.
double unit_uniform(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

std::vector<double> lattice(int count, double extent, double margin) {
  std::vector<double> coords;
  coords.reserve(count);
  if (count == 1) {
    coords.push_back(extent / 2.0);
    return coords;
  }
  const double span = extent - 2.0 * margin;
  for (int k = 0; k < count; ++k) {
    // Pin the last coordinate so the lattice reaches the far border exactly.
    coords.push_back(k == count - 1 ? margin + span : margin + span * k / (count - 1));
  }
  return coords;
}

std::vector<Point2D> lattice_points(int rows, int cols, const Area& area, double margin) {
  const auto xs = lattice(cols, area.width, margin);
  const auto ys = lattice(rows, area.height, margin);
  std::vector<Point2D> pts;
  pts.reserve(static_cast<std::size_t>(rows) * cols);
  for (double x : xs) {
    for (double y : ys) pts.push_back({x, y});
  }
  return pts;
}

std::vector<Point2D> place_sinks(const ScenarioConfig& config, const Area& area) {
  switch (config.sink_layout) {
    case SinkLayout::kCenter:
      return {{area.width / 2.0, area.height / 2.0}};
    case SinkLayout::kCorners:
      return {{0.0, 0.0}, {0.0, area.height}, {area.width, 0.0}, {area.width, area.height}};
    case SinkLayout::kCoords:
      if (config.sink_coords.empty()) fail("sink layout 'coords' needs at least one coordinate");
      return config.sink_coords;
  }
  return {};
}

void assign_demands(std::vector<DemandPoint>& dps, int num_phenomena, double drop_fraction,
                    std::mt19937_64& rng) {
  for (auto& dp : dps) {
    dp.demands.clear();
    for (int g = 0; g < num_phenomena; ++g) {
      if (drop_fraction <= 0.0 || unit_uniform(rng) >= drop_fraction) dp.demands.push_back(g);
    }
    if (dp.demands.empty()) {
      dp.demands.push_back(static_cast<int>(rng() % static_cast<std::uint64_t>(num_phenomena)));
    }
  }
}

void fill_common(Instance& in, const ScenarioConfig& config) {
  in.phenomena = config.phenomena;
  for (std::size_t g = 0; g < in.phenomena.size(); ++g) in.phenomena[g].id = static_cast<int>(g);
  in.periods = config.periods;
  in.period_length_min = config.period_length_min;
  in.comm_radius = config.comm_radius;
  in.device = config.device;
  in.sinks = place_sinks(config, in.area);
}

void fill_penalties(Instance& in, const ScenarioConfig& config) {
  const std::size_t G = in.phenomena.size();
  const double eh = config.penalty_uncovered.value_or(kUncoveredPenaltyFactor * max_period_draw(in));
  const double eg = config.penalty_activation.value_or(kDefaultActivationPenalty);
  in.penalties.uncovered.assign(in.demand_points.size() * G, eh);
  in.penalties.activation.assign(in.sensors.size() * G, eg);
}

void check_area(const Area& area) {
  if (!(area.width > 0.0) || !(area.height > 0.0) || !std::isfinite(area.width) ||
      !std::isfinite(area.height)) {
    fail("area dimensions must be positive and finite");
  }
}

}  // namespace

double max_period_draw(const Instance& in) {
  const DeviceProfile& dev = in.device;
  double draw = dev.maintenance_energy + dev.activation_energy;
  const double streams = static_cast<double>(in.sensors.size());
  for (const Phenomenon& ph : in.phenomena) {
    const LinkEnergy link = derive_energy_constants(dev, ph, in.period_length_min, in.comm_radius);
    draw += streams * (link.receive + link.transmit);
  }
  return draw;
}

void validate_instance(const Instance& in) {
  check_area(in.area);
  if (in.sensors.empty()) fail("instance has no sensors");
  if (in.demand_points.empty()) fail("instance has no demand points");
  if (in.sinks.empty()) fail("instance has no sinks");
  if (in.phenomena.empty()) fail("instance has no phenomena");
  if (in.periods < 1) fail("periods must be >= 1");
  if (!(in.period_length_min > 0.0)) fail("period length must be positive");
  if (!(in.comm_radius > 0.0)) fail("communication radius must be positive");

  for (int i = 0; i < in.num_sensors(); ++i) check_position(in, in.sensors[i], "sensor", i);
  for (int m = 0; m < in.num_sinks(); ++m) check_position(in, in.sinks[m], "sink", m);
  const int G = in.num_phenomena();
  for (int g = 0; g < G; ++g) {
    const Phenomenon& ph = in.phenomena[g];
    if (ph.id != g) fail("phenomenon ids must equal their list position");
    if (!(ph.coverage_radius > 0.0)) fail("coverage radius must be positive");
    if (!(ph.sampling_rate > 0.0)) fail("sampling rate must be positive");
    if (ph.bits_per_sample < 1) fail("bits per sample must be positive");
  }
  for (int j = 0; j < in.num_demand_points(); ++j) {
    const DemandPoint& dp = in.demand_points[j];
    check_position(in, dp.position, "demand point", j);
    if (dp.demands.empty()) fail("demand point " + std::to_string(j) + " demands nothing");
    if (!std::is_sorted(dp.demands.begin(), dp.demands.end()) ||
        std::adjacent_find(dp.demands.begin(), dp.demands.end()) != dp.demands.end()) {
      fail("demand point " + std::to_string(j) + " has unsorted or repeated demands");
    }
    if (dp.demands.front() < 0 || dp.demands.back() >= G) {
      fail("demand point " + std::to_string(j) + " demands an undeclared phenomenon");
    }
  }

  const DeviceProfile& dev = in.device;
  for (double v : {dev.battery_capacity, dev.activation_energy, dev.maintenance_energy,
                   dev.receive_energy_per_bit, dev.transmit.base_per_bit,
                   dev.transmit.quadratic_per_bit}) {
    if (!(v >= 0.0) || !std::isfinite(v)) fail("device energies must be finite and nonnegative");
  }
  if (!(dev.bit_rate > 0.0)) fail("bit rate must be positive");

  if (in.penalties.uncovered.size() != static_cast<std::size_t>(in.num_demand_points()) * G) {
    fail("uncovered penalty table has the wrong size");
  }
  if (in.penalties.activation.size() != static_cast<std::size_t>(in.num_sensors()) * G) {
    fail("activation penalty table has the wrong size");
  }
  const double draw = max_period_draw(in);
  for (double eh : in.penalties.uncovered) {
    if (!(eh > draw) || !std::isfinite(eh)) {
      std::ostringstream os;
      os << "uncovered penalty " << eh << " must exceed the maximum per-period draw " << draw;
      fail(os.str());
    }
  }
  for (double eg : in.penalties.activation) {
    if (!(eg >= 0.0) || !std::isfinite(eg)) fail("activation penalties must be nonnegative");
  }
}

DeviceProfile default_device() {
  // Transmission dominates: a hop of 2.4 m carrying 2 samples/min costs
  // about 1.1 units per hour, and cost grows with the square of the hop.
  DeviceProfile dev;
  dev.maintenance_energy = 0.05;
  dev.activation_energy = 0.1;
  dev.receive_energy_per_bit = 1.0e-6;
  dev.transmit.base_per_bit = 1.0e-6;
  dev.transmit.quadratic_per_bit = 1.0e-4;
  dev.battery_capacity = 2.55;
  dev.bit_rate = 250000.0;
  return dev;
}

std::vector<Phenomenon> default_phenomena() {
  return {Phenomenon{0, 8.8, 2.0, 16}, Phenomenon{1, 16.0, 1.0, 16}};
}

ScenarioConfig default_config() {
  ScenarioConfig config;
  config.phenomena = default_phenomena();
  config.device = default_device();
  return config;
}

ScenarioConfig scenario_config(int scenario) {
  ScenarioConfig config = default_config();
  if (scenario == 1) {
    config.sink_layout = SinkLayout::kCenter;
  } else if (scenario == 2) {
    config.sink_layout = SinkLayout::kCorners;
    // Three times the field: keep hop cost per unit of relative distance.
    config.device.transmit.quadratic_per_bit /= 9.0;
  } else {
    throw std::invalid_argument("scenario must be 1 or 2");
  }
  return config;
}

Area scenario_area(int scenario) {
  if (scenario == 1) return {10.0, 10.0};
  if (scenario == 2) return {30.0, 30.0};
  throw std::invalid_argument("scenario must be 1 or 2");
}

Instance gen_grid(int sensor_rows, int sensor_cols, int dp_rows, int dp_cols, Area area,
                  const ScenarioConfig& config) {
  if (sensor_rows < 1 || sensor_cols < 1 || dp_rows < 1 || dp_cols < 1) {
    fail("grid row and column counts must be >= 1");
  }
  check_area(area);
  if (config.grid_margin < 0.0 || 2.0 * config.grid_margin > std::min(area.width, area.height)) {
    fail("grid margin must lie in [0, min(width, height) / 2]");
  }
  Instance in;
  in.area = area;
  in.seed = config.seed;
  in.sensors = lattice_points(sensor_rows, sensor_cols, area, config.grid_margin);
  for (const Point2D& p : lattice_points(dp_rows, dp_cols, area, config.grid_margin)) {
    in.demand_points.push_back({p, {}});
  }
  fill_common(in, config);
  std::mt19937_64 rng(config.seed);
  assign_demands(in.demand_points, in.num_phenomena(), config.demand_drop_fraction, rng);
  fill_penalties(in, config);
  validate_instance(in);
  return in;
}

Instance gen_random(int n_sensors, int n_demand_points, Area area, std::uint64_t seed,
                    const ScenarioConfig& config) {
  if (n_sensors < 1 || n_demand_points < 1) fail("sensor and demand point counts must be >= 1");
  check_area(area);
  Instance in;
  in.area = area;
  in.seed = seed;
  std::mt19937_64 rng(seed);
  auto draw = [&] {
    const double x = unit_uniform(rng) * area.width;
    const double y = unit_uniform(rng) * area.height;
    return Point2D{x, y};
  };
  in.sensors.reserve(n_sensors);
  for (int i = 0; i < n_sensors; ++i) in.sensors.push_back(draw());
  in.demand_points.reserve(n_demand_points);
  for (int j = 0; j < n_demand_points; ++j) in.demand_points.push_back({draw(), {}});
  fill_common(in, config);
  assign_demands(in.demand_points, in.num_phenomena(), config.demand_drop_fraction, rng);
  fill_penalties(in, config);
  validate_instance(in);
  return in;
}

Instance scenario_grid(int scenario, int periods) {
  ScenarioConfig config = scenario_config(scenario);
  config.periods = periods;
  return gen_grid(4, 4, 10, 10, scenario_area(scenario), config);
}

Instance scenario_random(int scenario, int periods, std::uint64_t seed) {
  ScenarioConfig config = scenario_config(scenario);
  config.periods = periods;
  config.seed = seed;
  return gen_random(16, 100, scenario_area(scenario), seed, config);
}

}  // namespace wsn
