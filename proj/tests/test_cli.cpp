#include <gtest/gtest.h>

#include <sys/wait.h>

#include <algorithm>
#include <array>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <unistd.h>

#include "wsn/io.hpp"
#include "wsn/report.hpp"

#ifndef WSNPLAN_BIN
#error "WSNPLAN_BIN must name the CLI executable"
#endif

namespace fs = std::filesystem;

namespace wsn {
namespace {

struct CmdResult {
  int code = -1;
  std::string out;
};

class Cli : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() /
           ("wsnplan_cli_" + std::to_string(::getpid()) + "_" +
            ::testing::UnitTest::GetInstance()->current_test_info()->name());
    fs::remove_all(dir_);
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }

  std::string path(const std::string& name) const { return (dir_ / name).string(); }

  CmdResult run(const std::string& args) const {
    const std::string cmd = std::string(WSNPLAN_BIN) + " " + args + " 2>&1";
    CmdResult r;
    FILE* p = ::popen(cmd.c_str(), "r");
    if (!p) return r;
    std::array<char, 4096> buf;
    while (std::size_t n = std::fread(buf.data(), 1, buf.size(), p)) r.out.append(buf.data(), n);
    const int status = ::pclose(p);
    r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    return r;
  }

  std::vector<std::string> files() const {
    std::vector<std::string> names;
    for (const auto& e : fs::recursive_directory_iterator(dir_)) names.push_back(e.path().filename().string());
    std::sort(names.begin(), names.end());
    return names;
  }

  fs::path dir_;
};

TEST_F(Cli, GenPresetScenario) {
  const CmdResult r = run("gen grid --scenario 1 --out " + path("g.json"));
  ASSERT_EQ(r.code, 0) << r.out;
  const Instance in = load_instance(path("g.json"));
  EXPECT_EQ(in.num_sensors(), 16);
  EXPECT_EQ(in.num_demand_points(), 100);
  EXPECT_EQ(in.phenomena[0].coverage_radius, 8.8);
  EXPECT_EQ(in.phenomena[1].coverage_radius, 16.0);
  EXPECT_EQ(in.phenomena[0].sampling_rate, 2.0);
  EXPECT_EQ(in.phenomena[1].sampling_rate, 1.0);
  EXPECT_EQ(in.comm_radius, 11.0);
  ASSERT_EQ(in.num_sinks(), 1);
  EXPECT_EQ(in.sinks[0], (Point2D{5, 5}));
  ASSERT_EQ(run("gen grid --scenario 2 --out " + path("g2.json")).code, 0);
  EXPECT_EQ(load_instance(path("g2.json")).num_sinks(), 4);
}

TEST_F(Cli, GenRandomDeterministic) {
  ASSERT_EQ(run("gen random --seed 1 --out " + path("a.json")).code, 0);
  ASSERT_EQ(run("gen random --seed 1 --out " + path("b.json")).code, 0);
  EXPECT_EQ(read_file(path("a.json")), read_file(path("b.json")));
  ASSERT_EQ(run("gen random --seed 2 --out " + path("c.json")).code, 0);
  EXPECT_NE(read_file(path("a.json")), read_file(path("c.json")));
}

TEST_F(Cli, GenFlags) {
  const CmdResult r = run("gen random --sensors 5 --demand-points 7 --width 30 --height 20 --radii 3,4,5 --rates 1,2,3 "
                    "--sinks coords --sink 1,2 --sink 3,4 --periods 4 --battery 9 --seed 3 --out " +
                    path("f.json"));
  ASSERT_EQ(r.code, 0) << r.out;
  const Instance in = load_instance(path("f.json"));
  EXPECT_EQ(in.num_sensors(), 5);
  EXPECT_EQ(in.num_demand_points(), 7);
  EXPECT_EQ(in.num_phenomena(), 3);
  EXPECT_EQ(in.phenomena[2].coverage_radius, 5.0);
  EXPECT_EQ(in.phenomena[1].sampling_rate, 2.0);
  EXPECT_EQ(in.sinks, (std::vector<Point2D>{{1, 2}, {3, 4}}));
  EXPECT_EQ(in.periods, 4);
  EXPECT_EQ(in.device.battery_capacity, 9.0);
}

TEST_F(Cli, UsageErrorsWriteNothing) {
  EXPECT_EQ(run("gen grid --scenario 1").code, 2);
  EXPECT_EQ(run("gen grid --periods 0 --out " + path("x.json")).code, 2);
  EXPECT_EQ(run("gen random --radii 3,4 --rates 1 --out " + path("x.json")).code, 2);
  EXPECT_EQ(run("frobnicate").code, 2);
  EXPECT_EQ(run("").code, 2);
  EXPECT_TRUE(files().empty());
  EXPECT_EQ(run("--help").code, 0);
}

TEST_F(Cli, BuildWritesLpAndStats) {
  ASSERT_EQ(run("gen grid --sensor-rows 1 --sensor-cols 1 --dp-rows 1 --dp-cols 1 --width 10 --height 10 "
                "--radii 8.8 --rates 2 --out " + path("t.json")).code,
            0);
  const CmdResult r = run("build -i " + path("t.json") + " --lp " + path("t.lp") + " --stats " + path("s.json"));
  ASSERT_EQ(r.code, 0) << r.out;
  std::ifstream golden(std::string(WSN_TEST_DATA) + "/trivial.lp");
  std::stringstream ss;
  ss << golden.rdbuf();
  EXPECT_EQ(read_file(path("t.lp")), ss.str());
  EXPECT_NE(read_file(path("s.json")).find(kStatsFormat), std::string::npos);
}

TEST_F(Cli, BuildRejectsMalformedInstance) {
  write_file_atomic(path("bad.json"), "{\"format\": \"wsn-instance/1\", \"sensors\": 3}");
  EXPECT_EQ(run("build -i " + path("bad.json") + " --lp " + path("o.lp")).code, 2);
  EXPECT_EQ(run("build -i " + path("missing.json") + " --lp " + path("o.lp")).code, 2);
  EXPECT_FALSE(fs::exists(path("o.lp")));
}

TEST_F(Cli, SolveExactTrivialIsCertified) {
  ASSERT_EQ(run("gen grid --sensor-rows 1 --sensor-cols 1 --dp-rows 1 --dp-cols 1 --width 10 --height 10 "
                "--radii 8.8 --rates 2 --out " + path("t.json")).code,
            0);
  const CmdResult r = run("solve -i " + path("t.json") + " -m exact -o " + path("sol.json"));
  EXPECT_EQ(r.code, 0) << r.out;
  EXPECT_NE(r.out.find("certificate=true"), std::string::npos) << r.out;
  EXPECT_EQ(run("validate -i " + path("t.json") + " -s " + path("sol.json")).code, 0);
}

TEST_F(Cli, OracleOverCapIsUsageError) {
  ASSERT_EQ(run("gen grid --scenario 1 --out " + path("g.json")).code, 0);
  const CmdResult r = run("solve -i " + path("g.json") + " -m oracle -o " + path("sol.json"));
  EXPECT_EQ(r.code, 2);
  EXPECT_NE(r.out.find("cap"), std::string::npos) << r.out;
  EXPECT_FALSE(fs::exists(path("sol.json")));
}

TEST_F(Cli, ExactWithoutCertificateExitsThree) {
  ASSERT_EQ(run("gen random --scenario 1 --periods 2 --seed 3 --out " + path("r.json")).code, 0);
  const CmdResult r = run("solve -i " + path("r.json") + " -m exact --node-limit 10 -o " + path("sol.json"));
  EXPECT_EQ(r.code, 3) << r.out;
  EXPECT_NE(r.out.find("certificate=false"), std::string::npos);
  EXPECT_EQ(run("validate -i " + path("r.json") + " -s " + path("sol.json")).code, 0);
}

TEST_F(Cli, HeuristicPresetGridFullyCovered) {
  ASSERT_EQ(run("gen grid --scenario 1 --periods 1 --out " + path("g.json")).code, 0);
  const CmdResult r = run("solve -i " + path("g.json") + " -m heuristic -o " + path("sol.json"));
  ASSERT_EQ(r.code, 0) << r.out;
  EXPECT_NE(r.out.find("uncovered rate  0.0000%"), std::string::npos) << r.out;
  const CmdResult again = run("solve -i " + path("g.json") + " -m heuristic -o " + path("sol2.json"));
  EXPECT_EQ(read_file(path("sol.json")), read_file(path("sol2.json")));
}

TEST_F(Cli, ValidateMutatedSolution) {
  ASSERT_EQ(run("gen grid --scenario 1 --periods 1 --out " + path("g.json")).code, 0);
  ASSERT_EQ(run("solve -i " + path("g.json") + " -m heuristic -o " + path("sol.json")).code, 0);
  Solution sol = load_solution(path("sol.json"));
  const auto y = std::find_if(sol.values.begin(), sol.values.end(),
                              [](const auto& kv) { return kv.first.kind == VarKind::kY; });
  ASSERT_NE(y, sol.values.end());
  sol.values.erase(y);
  write_file_atomic(path("bad.json"), solution_to_json(sol));
  const CmdResult r = run("validate -i " + path("g.json") + " -s " + path("bad.json") + " --report " + path("v.json"));
  EXPECT_EQ(r.code, 1) << r.out;
  EXPECT_NE(r.out.find("violation"), std::string::npos) << r.out;
  EXPECT_NE(read_file(path("v.json")).find(kViolationsFormat), std::string::npos);

  write_file_atomic(path("ext.txt"), "y_i99_t0 = 1\n");
  EXPECT_EQ(run("validate -i " + path("g.json") + " -s " + path("ext.txt")).code, 1);
}

TEST_F(Cli, RenderFilesAndRange) {
  ASSERT_EQ(run("gen grid --scenario 1 --periods 2 --out " + path("g.json")).code, 0);
  ASSERT_EQ(run("solve -i " + path("g.json") + " -m heuristic -o " + path("sol.json")).code, 0);
  const CmdResult r = run("render -i " + path("g.json") + " -s " + path("sol.json") + " -d " + path("svg"));
  ASSERT_EQ(r.code, 0) << r.out;
  for (int t = 0; t < 2; ++t) {
    for (int g = 0; g < 2; ++g) {
      const std::string stem = "_t" + std::to_string(t) + "_g" + std::to_string(g) + ".svg";
      EXPECT_TRUE(fs::exists(path("svg/plan" + stem)));
      EXPECT_TRUE(fs::exists(path("svg/routes" + stem)));
    }
  }
  const CmdResult bad = run("render -i " + path("g.json") + " -s " + path("sol.json") + " -t 2 -d " + path("svg2"));
  EXPECT_EQ(bad.code, 2);
  EXPECT_FALSE(fs::exists(path("svg2")));
}

TEST_F(Cli, ExperimentSingletonCells) {
  write_file_atomic(path("spec.json"),
                    R"({"format":"wsn-experiment/1","periods":[1,2],"types":["grid","random"],"seeds":[4]})");
  const CmdResult r = run("experiment --spec " + path("spec.json") + " -o " + path("t.csv"));
  ASSERT_EQ(r.code, 0) << r.out;
  const auto rows = parse_experiment_csv(read_file(path("t.csv")));
  ASSERT_EQ(rows.size(), 4u);
  for (const auto& row : rows) {
    EXPECT_EQ(row.n_instances, 1);
    EXPECT_EQ(row.objective_std, 0.0);
    EXPECT_EQ(row.real_objective_std, 0.0);
    EXPECT_EQ(row.uncovered_rate_std, 0.0);
    EXPECT_EQ(row.time_std_s, 0.0);
  }
  write_file_atomic(path("bad.json"), R"({"format":"wsn-experiment/1","solver":"magic"})");
  EXPECT_EQ(run("experiment --spec " + path("bad.json") + " -o " + path("u.csv")).code, 2);
  EXPECT_FALSE(fs::exists(path("u.csv")));
}

TEST_F(Cli, AtomicWriteLeavesNoTemporaries) {
  ASSERT_EQ(run("gen grid --scenario 1 --out " + path("g.json")).code, 0);
  ASSERT_EQ(run("gen grid --scenario 2 --out " + path("g.json")).code, 0);
  EXPECT_EQ(files(), std::vector<std::string>{"g.json"});
  EXPECT_EQ(load_instance(path("g.json")).num_sinks(), 4);
}

}  // namespace
}  // namespace wsn
