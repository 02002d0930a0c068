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

#include "rvonav/config.hpp"
#include "rvonav/episode.hpp"
#include "rvonav/policy.hpp"

namespace rvonav {
namespace {

namespace fs = std::filesystem;

TEST(Config, JsonRoundTrip) {
  ExperimentConfig cfg;
  cfg.scenario.kind = ScenarioKind::Corridor;
  cfg.scenario.segments.push_back({{0, 1}, {2, 3}});
  cfg.train.lr_actor = 1e-3;
  cfg.robot_counts = {4, 6};
  cfg.scenarios = {ScenarioKind::Random};
  cfg.ablation_variants = {Variant::NonRvoObs};
  cfg.ablation_checkpoints["nrvo"] = "a.ckpt";
  cfg.network.encoder = nn::EncoderKind::UniLstm;
  const nlohmann::json j = to_json(cfg);
  EXPECT_EQ(to_json(experiment_from_json(j)), j);
}

TEST(Config, MissingKeysKeepDefaults) {
  const ExperimentConfig cfg = experiment_from_json(nlohmann::json::parse(R"({"episodes": 7})"));
  EXPECT_EQ(cfg.episodes, 7u);
  EXPECT_EQ(cfg.train.steps_per_rollout, 450u);
  EXPECT_EQ(cfg.max_steps, 300u);
}

TEST(Config, UnknownKeysAreRejected) {
  EXPECT_THROW(experiment_from_json(nlohmann::json::parse(R"({"episdes": 7})")), ConfigError);
  EXPECT_THROW(experiment_from_json(nlohmann::json::parse(R"({"train": {"lr": 1}})")), ConfigError);
}

TEST(Config, BadValuesAreRejected) {
  EXPECT_THROW(experiment_from_json(nlohmann::json::parse(R"({"policy": "orca"})")), ConfigError);
  EXPECT_THROW(experiment_from_json(nlohmann::json::parse(R"({"train": {"kl_limit": -1}})")),
               ConfigError);
  EXPECT_THROW(experiment_from_json(nlohmann::json::parse(R"({"episodes": "many"})")), ConfigError);
}

TEST(Config, MissingFileIsAConfigError) {
  EXPECT_THROW(load_experiment("/nonexistent/rvonav.json"), ConfigError);
}

TEST(Config, VariantsSwapComponents) {
  ExperimentConfig cfg;
  cfg.variant = Variant::NonRvoObs;
  EXPECT_EQ(cfg.network_for_variant().neighbor_encoding, nn::NeighborEncoding::Raw);
  cfg.variant = Variant::UniRecurrent;
  EXPECT_EQ(cfg.network_for_variant().encoder, nn::EncoderKind::UniLstm);
  cfg.variant = Variant::DistanceReward;
  EXPECT_EQ(cfg.world().reward_mode, RewardMode::Distance);
  cfg.variant = Variant::RlRvo;
  EXPECT_EQ(cfg.world().reward_mode, RewardMode::Rvo);
  EXPECT_EQ(cfg.network_for_variant().encoder, nn::EncoderKind::BiGru);
}

EpisodeRecord baseline_episode(std::size_t robots, std::uint64_t seed) {
  ScenarioConfig sc;
  sc.robot_count = robots;
  BaselinePolicy policy{SamplerConfig{}};
  return evaluate(sc, WorldConfig{}, policy, 1, seed).front();
}

TEST(RecordCsv, RoundTripReproducesRecord) {
  const EpisodeRecord rec = baseline_episode(4, 3);
  std::stringstream ss;
  write_record_csv(ss, rec);
  const auto rows = read_record_csv(ss);
  ASSERT_EQ(rows.size(), rec.rows.size());
  const EpisodeRecord back = record_from_rows(rows);
  EXPECT_EQ(back.robot_count, rec.robot_count);
  EXPECT_EQ(back.steps, rec.steps);
  EXPECT_EQ(back.arrivals, rec.arrivals);
  EXPECT_EQ(back.collisions, rec.collisions);
  EXPECT_EQ(back.timeouts, rec.timeouts);
  EXPECT_EQ(back.last_arrival_step, rec.last_arrival_step);
  EXPECT_EQ(back.active_steps, rec.active_steps);
  for (std::size_t i = 0; i < rec.path_length.size(); ++i) {
    EXPECT_NEAR(back.path_length[i], rec.path_length[i], 1e-9);
  }
  std::stringstream again;
  write_record_csv(again, back);
  EXPECT_EQ(again.str(), [&] {
    std::stringstream s;
    write_record_csv(s, rec);
    return s.str();
  }());
}

TEST(RecordCsv, SummaryFromRowsMatches) {
  std::vector<EpisodeRecord> recs, back;
  for (std::uint64_t s = 0; s < 3; ++s) {
    recs.push_back(baseline_episode(4, s));
    std::stringstream ss;
    write_record_csv(ss, recs.back());
    back.push_back(record_from_rows(read_record_csv(ss)));
  }
  const EvalReport a = summarize(recs, 0.1), b = summarize(back, 0.1);
  EXPECT_EQ(a.success_rate, b.success_rate);
  EXPECT_NEAR(a.travel_steps_mean, b.travel_steps_mean, 1e-9);
  EXPECT_NEAR(a.speed_mean, b.speed_mean, 1e-9);
}

TEST(RecordCsv, MalformedInputThrows) {
  std::stringstream empty;
  EXPECT_THROW(read_record_csv(empty), RecordFormatError);
  std::stringstream bad("step,robot_id,x\n1,2\n");
  EXPECT_THROW(read_record_csv(bad), RecordFormatError);
}

TEST(FormatNumber, ShortestRoundTrip) {
  EXPECT_EQ(format_number(0.1), "0.1");
  EXPECT_EQ(std::stod(format_number(1.0 / 3.0)), 1.0 / 3.0);
}

}  // namespace
}  // namespace rvonav
