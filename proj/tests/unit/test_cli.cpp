// Copyright 2026 The rvo-nav Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "cli.hpp"
#include "rvonav/checkpoint.hpp"

namespace rvonav::cli {
namespace {

namespace fs = std::filesystem;

struct Result {
  int code;
  std::string out;
  std::string err;
};

Result invoke(std::vector<std::string> args) {
  args.insert(args.begin(), "rvo-nav");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int code = run(int(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

fs::path scratch(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / ("rvonav_cli_" + name);
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::size_t count(const std::string& s, const std::string& needle) {
  std::size_t n = 0;
  for (auto pos = s.find(needle); pos != std::string::npos; pos = s.find(needle, pos + 1)) ++n;
  return n;
}

std::size_t lines(const std::string& s) { return count(s, "\n"); }

void write(const fs::path& p, const std::string& text) { std::ofstream(p) << text; }

TEST(Cli, MissingConfigExitsWithInputError) {
  const Result r = invoke({"eval", "--config", "/nonexistent/cfg.json"});
  EXPECT_EQ(r.code, kExitInput);
  EXPECT_NE(r.err.find("cfg.json"), std::string::npos);
}

TEST(Cli, UnknownSubcommandIsAnInputError) {
  EXPECT_EQ(invoke({"fly"}).code, kExitInput);
  EXPECT_EQ(invoke({}).code, kExitInput);
}

TEST(Cli, BadConfigValueIsAnInputError) {
  const fs::path dir = scratch("badcfg");
  write(dir / "c.json", R"({"scenario": {"kind": "maze"}})");
  EXPECT_EQ(invoke({"eval", "--config", (dir / "c.json").string()}).code, kExitInput);
}

TEST(Cli, LearnedPolicyNeedsCheckpoint) {
  const fs::path dir = scratch("nockpt");
  const Result r = invoke({"eval", "--policy", "rlrvo", "--checkpoint",
                           (dir / "absent.ckpt").string(), "--out", dir.string()});
  EXPECT_EQ(r.code, kExitInput);
}

TEST(Cli, CheckpointVariantMismatchIsRejected) {
  const fs::path dir = scratch("mismatch");
  nn::NetworkConfig nc;
  nc.hidden = 4;
  nc.fc = 4;
  save_checkpoint(dir / "a.ckpt", nn::Network(nc), {{"variant", "rlrvo"}});
  EXPECT_THROW(load_network_policy(dir / "a.ckpt", Variant::UniRecurrent), CliError);
  EXPECT_NO_THROW(load_network_policy(dir / "a.ckpt", Variant::RlRvo));
}

TEST(Cli, EmptyRecordIsAnInputError) {
  const fs::path dir = scratch("empty_record");
  write(dir / "r.csv", "");
  EXPECT_EQ(invoke({"plot", "--record", (dir / "r.csv").string()}).code, kExitInput);
  EXPECT_EQ(invoke({"plot", "--record", (dir / "nope.csv").string()}).code, kExitInput);
}

TEST(Cli, EvalWritesMetricsAndRecords) {
  const fs::path dir = scratch("eval");
  write(dir / "c.json", R"({"policy": "baseline", "episodes": 2, "robot_counts": [2, 4],
                           "scenarios": ["circle", "random"], "records": 1})");
  const Result r = invoke({"eval", "--config", (dir / "c.json").string(), "--out",
                           (dir / "out").string()});
  ASSERT_EQ(r.code, kExitOk) << r.err;
  EXPECT_EQ(lines(slurp(dir / "out" / "metrics.csv")), 5u);
  EXPECT_EQ(lines(slurp(dir / "out" / "timing.csv")), 5u);
  EXPECT_TRUE(fs::exists(dir / "out" / "records" / "circle_n2_ep0.csv"));
  EXPECT_TRUE(fs::exists(dir / "out" / "records" / "random_n4_ep0.csv"));

  // Metrics are deterministic; timing is kept apart for that reason.
  const std::string first = slurp(dir / "out" / "metrics.csv");
  ASSERT_EQ(invoke({"eval", "--config", (dir / "c.json").string(), "--out",
                    (dir / "out").string()}).code, kExitOk);
  EXPECT_EQ(slurp(dir / "out" / "metrics.csv"), first);
}

TEST(Cli, PlotDrawsOnePolylinePerRobotAndIsStable) {
  const fs::path dir = scratch("plot");
  ASSERT_EQ(invoke({"eval", "--policy", "baseline", "--robots", "2", "--episodes", "1", "--out",
                    dir.string()}).code, kExitOk);
  const fs::path rec = dir / "records" / "circle_n2_ep0.csv";
  ASSERT_EQ(invoke({"plot", "--record", rec.string(), "--out", (dir / "a.svg").string()}).code,
            kExitOk);
  ASSERT_EQ(invoke({"plot", "--record", rec.string(), "--out", (dir / "b.svg").string()}).code,
            kExitOk);
  const std::string a = slurp(dir / "a.svg");
  EXPECT_EQ(count(a, "<polyline"), 2u);
  EXPECT_NE(a.find("x (m)"), std::string::npos);
  EXPECT_EQ(a, slurp(dir / "b.svg"));
}

TEST(Cli, AblationTrainsMissingVariantsAndWritesTable) {
  const fs::path dir = scratch("ablation");
  write(dir / "c.json", R"({
    "episodes": 2,
    "scenarios": ["circle"],
    "robot_counts": [2],
    "network": {"hidden": 8, "fc": 8},
    "train": {"stage1_epochs": 1, "stage2_epochs": 0, "stage1_robots": 2,
              "steps_per_rollout": 10, "policy_iters": 1, "value_iters": 1,
              "eval_episodes": 1, "record_wall_time": false},
    "ablation": {"variants": ["rlrvo", "nrvo"], "train_missing": true}
  })");
  const Result r = invoke({"ablation", "--config", (dir / "c.json").string(), "--out",
                           (dir / "out").string()});
  ASSERT_EQ(r.code, kExitOk) << r.err;
  const std::string table = slurp(dir / "out" / "ablation.csv");
  EXPECT_EQ(lines(table), 3u);
  EXPECT_NE(table.find("\nrlrvo,circle,2,2,"), std::string::npos);
  EXPECT_NE(table.find("\nnrvo,circle,2,2,"), std::string::npos);
}

TEST(Cli, AblationWithoutCheckpointsFails) {
  const fs::path dir = scratch("ablation_missing");
  write(dir / "c.json", R"({"ablation": {"variants": ["lstm"]}})");
  EXPECT_EQ(invoke({"ablation", "--config", (dir / "c.json").string(), "--out", dir.string()}).code,
            kExitInput);
}

}  // namespace
}  // namespace rvonav::cli
