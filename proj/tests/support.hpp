#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

#include "wsn/arcs.hpp"
#include "wsn/instance.hpp"
#include "wsn/model.hpp"

namespace wsn::testing {

// One sensor, one demand point and the sink, all at the center of a 10 m
// square; one phenomenon, one period.
inline Instance trivial_instance() {
  ScenarioConfig cfg = default_config();
  cfg.phenomena = {Phenomenon{0, 8.8, 2.0, 16}};
  return gen_grid(1, 1, 1, 1, Area{10, 10}, cfg);
}

struct TinyFamily {
  int sensors;
  int demand_points;
  int periods;
  int phenomena;
  double side;
  double coverage_radius;
  double comm_radius;
};

inline const std::vector<TinyFamily>& tiny_families() {
  static const std::vector<TinyFamily> families{
      {3, 4, 2, 1, 8, 3.0, 4.0},
      {2, 3, 2, 1, 6, 4.0, 6.0},
      {3, 4, 1, 1, 6, 4.0, 6.0},
      {2, 2, 1, 2, 6, 3.0, 6.0},
      {3, 3, 2, 1, 7, 3.0, 3.5},
  };
  return families;
}

inline Instance tiny_instance(const TinyFamily& f, std::uint64_t seed) {
  ScenarioConfig cfg = default_config();
  cfg.phenomena.clear();
  for (int g = 0; g < f.phenomena; ++g) {
    cfg.phenomena.push_back(Phenomenon{g, g == 0 ? f.coverage_radius : 2 * f.coverage_radius, 2.0 - g, 16});
  }
  cfg.periods = f.periods;
  cfg.comm_radius = f.comm_radius;
  cfg.seed = seed;
  return gen_random(f.sensors, f.demand_points, Area{f.side, f.side}, seed, cfg);
}

// The first `per_family` seeds of every family whose model stays within
// `max_binaries`.
inline std::vector<Instance> tiny_instances(int per_family, int max_binaries = 40) {
  std::vector<Instance> out;
  for (const TinyFamily& f : tiny_families()) {
    int taken = 0;
    for (std::uint64_t seed = 0; taken < per_family && seed < 10000; ++seed) {
      Instance in = tiny_instance(f, seed);
      if (build_model(in, build_arcs(in)).num_binaries() > max_binaries) continue;
      out.push_back(std::move(in));
      ++taken;
    }
  }
  return out;
}

// Small instance with every constant drawn at random, for format tests.
inline Instance random_model_instance(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  ScenarioConfig cfg = default_config();
  cfg.periods = 1 + static_cast<int>(rng() % 3);
  cfg.comm_radius = 2.0 + 9.0 * u(rng);
  cfg.phenomena.resize(1 + rng() % 2);
  for (auto& p : cfg.phenomena) {
    p.coverage_radius = 1.0 + 6.0 * u(rng);
    p.sampling_rate = 0.1 + 5.0 * u(rng);
    p.bits_per_sample = 8 + static_cast<int>(rng() % 32);
  }
  cfg.device.maintenance_energy = u(rng) * 0.3;
  cfg.device.activation_energy = u(rng) * 0.7;
  cfg.device.receive_energy_per_bit = u(rng) * 3e-6;
  cfg.device.transmit.base_per_bit = u(rng) * 3e-6;
  cfg.device.transmit.quadratic_per_bit = u(rng) * 3e-4;
  cfg.device.battery_capacity = 0.5 + 3 * u(rng);
  cfg.demand_drop_fraction = 0.25 * u(rng);
  cfg.sink_layout = rng() % 2 ? SinkLayout::kCorners : SinkLayout::kCenter;
  cfg.seed = rng();
  return gen_random(2 + rng() % 5, 2 + rng() % 8, Area{4 + 8 * u(rng), 4 + 8 * u(rng)}, cfg.seed, cfg);
}

inline bool close_rel(double a, double b, double rel = 1e-9) {
  return std::abs(a - b) <= rel * std::max({1.0, std::abs(a), std::abs(b)});
}

}  // namespace wsn::testing
