#include <gtest/gtest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <unistd.h>

#include <json.hpp>

#include "cli.hpp"

namespace {

struct Run {
  int code = 0;
  std::string out;
  std::string err;
};

Run run(std::vector<std::string> args) {
  args.insert(args.begin(), "inac_sim");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  Run r;
  r.code = inac::cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
  r.out = out.str();
  r.err = err.str();
  return r;
}

std::filesystem::path temp_path(const std::string& name) {
  return std::filesystem::temp_directory_path() / ("inac_cli_test_" + std::to_string(::getpid()) + "_" + name);
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream s;
  s << in.rdbuf();
  return s.str();
}

}  // namespace

TEST(Cli, HelpExitsZero) {
  const auto r = run({"--help"});
  EXPECT_EQ(r.code, 0);
  EXPECT_NE(r.out.find("experiment"), std::string::npos);
  EXPECT_EQ(run({"position", "--help"}).code, 0);
}

TEST(Cli, UnknownOptionExitsOneWithUsage) {
  const auto r = run({"position", "--bogus"});
  EXPECT_EQ(r.code, 1);
  EXPECT_NE(r.err.find("error:"), std::string::npos);
  EXPECT_NE(r.err.find("--anchors"), std::string::npos);
  EXPECT_EQ(run({}).code, 1);
}

TEST(Cli, PositionNoiselessTable) {
  const auto r = run({"--seed", "1", "position", "--anchors", "d1,d2,d3,d4", "--sigma-ure", "0", "--clock-bias-m",
                      "300", "--epsilon", "1e-4"});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_NE(r.err.find("seed: 1"), std::string::npos);
  EXPECT_NE(r.out.find("trial,est_x,est_y,est_z,clock_m,iters,converged,degenerate,pdop,error_m\r\n"),
            std::string::npos);
  const auto last = r.out.substr(r.out.rfind("\r\n", r.out.size() - 3) + 2);
  const double err = std::stod(last.substr(last.rfind(',') + 1));
  EXPECT_LT(err, 1e-3);
}

TEST(Cli, PositionUndefinedPdopExitsTwo) {
  const auto r = run({"position", "--anchors", "d1,d2,d3", "--sigma-ure", "0"});
  EXPECT_EQ(r.code, 2);
  EXPECT_NE(r.err.find("PdopUndefined"), std::string::npos);
  EXPECT_EQ(run({"position", "--user", "indoor", "--anchors", "r1,r2,r3,r4"}).code, 2);
}

TEST(Cli, PositionBadInputExitsOne) {
  EXPECT_EQ(run({"position", "--anchors", "q1"}).code, 1);
  EXPECT_EQ(run({"position", "--user", "nobody"}).code, 1);
  EXPECT_EQ(run({"position", "--anchors", "d1,d2,d3,d11"}).code, 1);
}

TEST(Cli, SelectNpaSatelliteRows) {
  const auto r = run({"select", "--algo", "npa", "--npa-rows", "satellite", "--sigma-ure", "0"});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto j = nlohmann::json::parse(r.out);
  EXPECT_EQ(j["selected"], 6);
  EXPECT_EQ(j["per_candidate"].size(), 7u);
  EXPECT_FALSE(j["tie_broken"].get<bool>());
}

TEST(Cli, SelectNpaIndoorIsInfeasible) {
  const auto r = run({"select", "--algo", "npa", "--user", "indoor"});
  EXPECT_EQ(r.code, 2);
  EXPECT_TRUE(nlohmann::json::parse(r.out).contains("error"));
}

TEST(Cli, SelectRsaAndCpa) {
  const auto rsa = run({"--seed", "3", "select", "--algo", "rsa"});
  ASSERT_EQ(rsa.code, 0) << rsa.err;
  const int chosen = nlohmann::json::parse(rsa.out)["selected"];
  EXPECT_GE(chosen, 4);
  EXPECT_LE(chosen, 10);
  const auto cpa = run({"select", "--algo", "cpa", "--trials", "8", "--paper-literal"});
  ASSERT_EQ(cpa.code, 0) << cpa.err;
  EXPECT_EQ(nlohmann::json::parse(cpa.out)["per_candidate"].size(), 10u);
}

TEST(Cli, SimulateJson) {
  const auto r = run({"simulate", "--satellite", "5", "--trials", "16", "--elements", "8", "--paper-literal"});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto j = nlohmann::json::parse(r.out);
  EXPECT_EQ(j["satellite"], 5);
  EXPECT_EQ(j["n_elements"], 8);
  EXPECT_GT(j["outdoor"]["mean_gain"].get<double>(), 0.0);
}

TEST(Cli, SimulateRejectsBadAllocation) {
  EXPECT_EQ(run({"simulate", "--satellite", "5", "--trials", "4"}).code, 1);  // 0.8^2 + 0.2^2 != 1
  EXPECT_EQ(run({"simulate", "--mode", "co-inac", "--omega-c", "0.8", "--omega-n", "0.6"}).code, 1);
  EXPECT_EQ(run({"simulate", "--satellite", "11", "--paper-literal"}).code, 1);
}

TEST(Cli, SeedFromEnvironment) {
  ::setenv("INAC_SEED", "99", 1);
  const auto r = run({"select", "--algo", "rsa"});
  ::unsetenv("INAC_SEED");
  EXPECT_NE(r.err.find("seed: 99"), std::string::npos);
  ::setenv("INAC_SEED", "abc", 1);
  EXPECT_EQ(run({"select", "--algo", "rsa"}).code, 1);
  ::unsetenv("INAC_SEED");
}

TEST(Cli, ExperimentWritesCsvAndRaw) {
  const auto path = temp_path("fig9.csv");
  const auto r = run({"experiment", "--preset", "fig9", "--trials", "4", "--sweep", "21e6,22e6", "--out",
                      path.string(), "--raw"});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto csv = slurp(path);
  EXPECT_EQ(csv.rfind("# seed: ", 0), 0u);
  EXPECT_NE(csv.find("distance_m,elevation_deg,pdop"), std::string::npos);
  auto raw = path;
  raw.replace_filename(path.stem().string() + ".raw.csv");
  EXPECT_NE(slurp(raw).find("# table: raw"), std::string::npos);
  EXPECT_NE(r.err.find("wall time"), std::string::npos);
  std::filesystem::remove(path);
  std::filesystem::remove(raw);
}

TEST(Cli, ExperimentRejectsUnknownPresetAndBadSweep) {
  EXPECT_EQ(run({"experiment", "--preset", "fig12"}).code, 1);
  EXPECT_EQ(run({"experiment", "--preset", "fig8", "--sweep", "0.5"}).code, 1);
  EXPECT_EQ(run({"experiment"}).code, 1);
}

TEST(Cli, ScenarioDumpAndValidate) {
  const auto path = temp_path("scenario.json");
  ASSERT_EQ(run({"scenario", "dump", "--out", path.string()}).code, 0);
  const auto v = run({"scenario", "validate", path.string()});
  EXPECT_EQ(v.code, 0);
  EXPECT_NE(v.out.find("10 satellites"), std::string::npos);

  auto doc = nlohmann::json::parse(slurp(path));
  doc["visibility"]["outdoor"]["invisible"].push_back(1);
  std::ofstream(path) << doc.dump();
  const auto bad = run({"scenario", "validate", path.string()});
  EXPECT_EQ(bad.code, 1);
  EXPECT_NE(bad.err.find("overlap"), std::string::npos);
  std::filesystem::remove(path);
}

TEST(Cli, ConfigFileDrivesCommands) {
  const auto path = temp_path("config.json");
  ASSERT_EQ(run({"scenario", "dump", "--out", path.string()}).code, 0);
  const auto r = run({"--config", path.string(), "position", "--anchors", "d1,d2,d3,d4", "--sigma-ure", "0"});
  EXPECT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(run({"--config", "/nonexistent.json", "scenario", "dump"}).code, 1);
  std::filesystem::remove(path);
}
