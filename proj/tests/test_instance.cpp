#include <gtest/gtest.h>

#include <cmath>
#include <set>

#include "support.hpp"
#include "wsn/arcs.hpp"
#include "wsn/energy.hpp"
#include "wsn/instance.hpp"
#include "wsn/io.hpp"

namespace wsn {
namespace {

ScenarioConfig one_phenomenon(double radius) {
  ScenarioConfig cfg = default_config();
  cfg.phenomena = {Phenomenon{0, radius, 2.0, 16}};
  return cfg;
}

TEST(GenGrid, PresetScenarioShape) {
  const Instance in = gen_grid(4, 4, 10, 10, Area{10, 10}, default_config());
  EXPECT_EQ(in.num_sensors(), 16);
  EXPECT_EQ(in.num_demand_points(), 100);
  ASSERT_EQ(in.num_sinks(), 1);
  EXPECT_EQ(in.sinks[0], (Point2D{5, 5}));
}

TEST(GenGrid, SinglePointLatticeIsCentered) {
  const Instance in = gen_grid(1, 1, 1, 1, Area{10, 10}, default_config());
  EXPECT_EQ(in.sensors[0], (Point2D{5, 5}));
  EXPECT_EQ(in.demand_points[0].position, (Point2D{5, 5}));
}

TEST(GenGrid, CornerLattice) {
  const Instance in = gen_grid(2, 2, 1, 1, Area{10, 10}, default_config());
  std::vector<Point2D> got = in.sensors;
  std::sort(got.begin(), got.end(), [](auto a, auto b) { return std::tie(a.x, a.y) < std::tie(b.x, b.y); });
  EXPECT_EQ(got, (std::vector<Point2D>{{0, 0}, {0, 10}, {10, 0}, {10, 10}}));
}

TEST(GenGrid, RejectsBadArguments) {
  EXPECT_THROW(gen_grid(0, 4, 10, 10, Area{10, 10}, default_config()), InstanceError);
  EXPECT_THROW(gen_grid(4, 4, 10, 0, Area{10, 10}, default_config()), InstanceError);
  EXPECT_THROW(gen_grid(4, 4, 10, 10, Area{0, 10}, default_config()), InstanceError);
  EXPECT_THROW(gen_grid(4, 4, 10, 10, Area{10, -1}, default_config()), InstanceError);
}

TEST(GenRandom, Deterministic) {
  const Instance a = gen_random(16, 100, Area{10, 10}, 42, default_config());
  const Instance b = gen_random(16, 100, Area{10, 10}, 42, default_config());
  EXPECT_EQ(a, b);
  EXPECT_EQ(instance_to_json(a), instance_to_json(b));
}

TEST(GenRandom, SeedSensitive) {
  const Instance a = gen_random(16, 100, Area{10, 10}, 42, default_config());
  const Instance b = gen_random(16, 100, Area{10, 10}, 43, default_config());
  EXPECT_NE(a.sensors, b.sensors);
}

TEST(GenRandom, PositionsInsideArea) {
  const Instance one = gen_random(1, 1, Area{10, 10}, 7, default_config());
  EXPECT_TRUE(one.area.contains(one.sensors[0]));
  EXPECT_TRUE(one.area.contains(one.demand_points[0].position));
  for (std::uint64_t seed = 0; seed < 1000; ++seed) {
    const Instance in = gen_random(5, 5, Area{7.5, 3}, seed, default_config());
    for (const auto& p : in.sensors) ASSERT_TRUE(in.area.contains(p)) << seed;
    for (const auto& d : in.demand_points) ASSERT_TRUE(in.area.contains(d.position)) << seed;
    for (const auto& s : in.sinks) ASSERT_TRUE(in.area.contains(s)) << seed;
  }
}

TEST(GenRandom, RejectsBadCounts) {
  EXPECT_THROW(gen_random(0, 1, Area{10, 10}, 1, default_config()), InstanceError);
  EXPECT_THROW(gen_random(1, 0, Area{10, 10}, 1, default_config()), InstanceError);
}

TEST(Arcs, CoverageBoundaryIncluded) {
  ScenarioConfig cfg = one_phenomenon(8.8);
  cfg.sink_layout = SinkLayout::kCoords;
  cfg.sink_coords = {{0, 0}};
  Instance in = gen_grid(1, 1, 1, 1, Area{10, 10}, cfg);
  in.sensors[0] = {0, 0};
  in.demand_points[0].position = {0, 8.8};
  const ArcSets arcs = build_arcs(in);
  ASSERT_EQ(arcs.coverage[0].size(), 1u);
}

TEST(Arcs, CommStrictExceedance) {
  ScenarioConfig cfg = one_phenomenon(8.8);
  cfg.comm_radius = 11.0;
  Instance in = gen_grid(1, 2, 1, 1, Area{20, 20}, cfg);
  in.sensors = {{0, 0}, {0, 11.000001}};
  EXPECT_TRUE(build_arcs(in).comm.empty());
  in.sensors[1] = {0, 11.0};
  EXPECT_EQ(build_arcs(in).comm.size(), 2u);
}

TEST(Arcs, WideRadiusCoversEverything) {
  const Instance in = scenario_grid(1, 1);
  const ArcSets arcs = build_arcs(in);
  ASSERT_EQ(in.phenomena[1].coverage_radius, 16.0);
  int pairs = 0;
  for (int i = 0; i < in.num_sensors(); ++i) {
    for (int j = 0; j < in.num_demand_points(); ++j) {
      ASSERT_LE(distance(in.sensors[i], in.demand_points[j].position), 16.0);
      ++pairs;
    }
  }
  EXPECT_EQ(pairs, 1600);
  EXPECT_EQ(static_cast<int>(arcs.coverage[1].size()), 1600);
}

// Independent quadratic recomputation.
TEST(Arcs, MatchBruteForce) {
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    const Instance in = scenario_random(seed % 2 ? 2 : 1, 1, seed);
    const ArcSets arcs = build_arcs(in);
    for (int g = 0; g < in.num_phenomena(); ++g) {
      std::vector<CoverArc> expect;
      for (int i = 0; i < in.num_sensors(); ++i) {
        for (int j = 0; j < in.num_demand_points(); ++j) {
          const double d = std::hypot(in.sensors[i].x - in.demand_points[j].position.x,
                                      in.sensors[i].y - in.demand_points[j].position.y);
          if (d <= in.phenomena[g].coverage_radius) expect.push_back({i, j});
        }
      }
      std::vector<CoverArc> got = arcs.coverage[g];
      std::sort(got.begin(), got.end());
      ASSERT_EQ(got, expect) << "seed " << seed << " g " << g;
    }
    std::set<std::pair<int, int>> comm, to_sink;
    for (int i = 0; i < in.num_sensors(); ++i) {
      for (int k = 0; k < in.num_sensors(); ++k) {
        const double d = std::hypot(in.sensors[i].x - in.sensors[k].x, in.sensors[i].y - in.sensors[k].y);
        if (i != k && d <= in.comm_radius) comm.insert({i, k});
      }
      for (int m = 0; m < in.num_sinks(); ++m) {
        const double d = std::hypot(in.sensors[i].x - in.sinks[m].x, in.sensors[i].y - in.sinks[m].y);
        if (d <= in.comm_radius) to_sink.insert({i, m});
      }
    }
    using PairSet = std::set<std::pair<int, int>>;
    EXPECT_EQ(PairSet(arcs.comm.begin(), arcs.comm.end()), comm);
    EXPECT_EQ(arcs.comm.size(), comm.size());
    EXPECT_EQ(PairSet(arcs.to_sink.begin(), arcs.to_sink.end()), to_sink);
  }
}

TEST(Arcs, ParallelMatchesSerial) {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const Instance in = gen_random(60, 400, Area{30, 30}, seed, default_config());
    EXPECT_EQ(build_arcs(in), build_arcs_serial(in));
  }
}

TEST(Arcs, MonotoneInRadius) {
  Instance in = scenario_random(1, 1, 3);
  in.comm_radius = 3.0;
  for (auto& p : in.phenomena) p.coverage_radius = 2.0;
  ArcSets prev = build_arcs(in);
  for (int step = 0; step < 8; ++step) {
    in.comm_radius += 1.1;
    for (auto& p : in.phenomena) p.coverage_radius += 1.3;
    const ArcSets next = build_arcs(in);
    for (std::size_t g = 0; g < prev.coverage.size(); ++g) {
      for (const CoverArc& a : prev.coverage[g]) {
        EXPECT_NE(std::find(next.coverage[g].begin(), next.coverage[g].end(), a), next.coverage[g].end());
      }
    }
    for (const auto& a : prev.comm) {
      EXPECT_NE(std::find(next.comm.begin(), next.comm.end(), a), next.comm.end());
    }
    EXPECT_GE(next.to_sink.size(), prev.to_sink.size());
    prev = next;
  }
}

TEST(Energy, VolumeArithmetic) {
  EXPECT_EQ(data_volume_bits(Phenomenon{0, 8.8, 2.0, 16}, 60.0), 1920.0);
}

TEST(Energy, ZeroReceiveCost) {
  DeviceProfile dev = default_device();
  dev.receive_energy_per_bit = 0.0;
  EXPECT_EQ(derive_energy_constants(dev, Phenomenon{0, 8.8, 50.0, 64}, 600.0, 3.0).receive, 0.0);
}

TEST(Energy, RejectsNonpositivePeriod) {
  EXPECT_THROW(derive_energy_constants(default_device(), Phenomenon{0, 8.8, 2, 16}, 0.0, 1.0),
               std::invalid_argument);
  EXPECT_THROW(derive_energy_constants(default_device(), Phenomenon{0, 8.8, 2, 16}, -5.0, 1.0),
               std::invalid_argument);
}

TEST(Energy, HandComputedHop) {
  // 1920 bits at 2 m: 1920 * (1e-6 + 1e-4 * 4) and 1920 * 1e-6.
  const LinkEnergy e = derive_energy_constants(default_device(), Phenomenon{0, 8.8, 2, 16}, 60, 2.0);
  EXPECT_NEAR(e.transmit, 0.76992, 1e-12);
  EXPECT_NEAR(e.receive, 0.00192, 1e-15);
}

TEST(Energy, LinearInEachFactor) {
  const DeviceProfile dev = default_device();
  const Phenomenon base{0, 8.8, 2.0, 16};
  const Instance in = scenario_random(1, 1, 11);
  const ArcSets arcs = build_arcs(in);
  for (const auto& [i, k] : arcs.comm) {
    const double d = distance(in.sensors[i], in.sensors[k]);
    const LinkEnergy e0 = derive_energy_constants(dev, base, 60.0, d);
    Phenomenon doubled_rate = base;
    doubled_rate.sampling_rate *= 2;
    Phenomenon tripled_bits = base;
    tripled_bits.bits_per_sample *= 3;
    EXPECT_DOUBLE_EQ(derive_energy_constants(dev, doubled_rate, 60.0, d).transmit, 2 * e0.transmit);
    EXPECT_DOUBLE_EQ(derive_energy_constants(dev, tripled_bits, 60.0, d).transmit, 3 * e0.transmit);
    EXPECT_DOUBLE_EQ(derive_energy_constants(dev, base, 150.0, d).transmit, 2.5 * e0.transmit);
    EXPECT_DOUBLE_EQ(derive_energy_constants(dev, doubled_rate, 60.0, d).receive, 2 * e0.receive);
  }
}

TEST(InstanceJson, RoundTrip) {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const Instance in = scenario_random(1 + seed % 2, 2, seed);
    EXPECT_EQ(parse_instance_json(instance_to_json(in)), in);
  }
  const Instance grid = scenario_grid(2, 3);
  EXPECT_EQ(parse_instance_json(instance_to_json(grid)), grid);
}

TEST(InstanceJson, RejectsWrongFormat) {
  EXPECT_THROW(parse_instance_json("{\"format\":\"other\"}"), FormatError);
  EXPECT_THROW(parse_instance_json("not json"), FormatError);
  std::string text = instance_to_json(testing::trivial_instance());
  const auto at = text.find("\"periods\": 1");
  ASSERT_NE(at, std::string::npos);
  text.replace(at, 12, "\"periods\": 0");
  EXPECT_THROW(parse_instance_json(text), InstanceError);
}

TEST(PresetScenario, ParameterList) {
  const Instance in = scenario_grid(1, 1);
  EXPECT_EQ(in.phenomena[0].coverage_radius, 8.8);
  EXPECT_EQ(in.phenomena[1].coverage_radius, 16.0);
  EXPECT_EQ(in.phenomena[0].sampling_rate, 2.0);
  EXPECT_EQ(in.phenomena[1].sampling_rate, 1.0);
  EXPECT_EQ(in.comm_radius, 11.0);
  const Instance corners = scenario_grid(2, 1);
  EXPECT_EQ(corners.num_sinks(), 4);
}

}  // namespace
}  // namespace wsn
