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

#ifndef RVONAV_CONFIG_HPP_
#define RVONAV_CONFIG_HPP_

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "rvonav/baseline.hpp"
#include "rvonav/network.hpp"
#include "rvonav/world.hpp"

namespace rvonav {

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// PPO schedule and optimiser settings; defaults follow the reference hyperparameters.
struct TrainConfig {
  std::size_t steps_per_rollout = 450;  ///< T, per robot
  std::size_t policy_iters = 50;        ///< K_iter
  std::size_t value_iters = 50;         ///< H_iter
  double kl_limit = 0.01;
  double lr_actor = 4e-6;
  double lr_critic = 5e-5;
  double gamma = 0.99;
  double lambda = 0.95;
  double clip_eps = 0.2;
  bool normalize_advantages = true;
  double adam_beta1 = 0.9;
  double adam_beta2 = 0.999;
  double adam_eps = 1e-8;
  std::size_t stage1_epochs = 200;
  std::size_t stage2_epochs = 1000;
  std::size_t stage1_robots = 4;
  std::size_t stage2_robots = 10;
  std::size_t episode_max_steps = 150;  ///< Episode cap while collecting rollouts.
  std::size_t eval_episodes = 20;
  std::size_t eval_every = 1;
  double stop_threshold = 0.95;
  std::size_t patience = 5;
  std::size_t checkpoint_every = 50;
  std::uint64_t seed = 0;
  bool record_wall_time = true;

  void validate() const;
};

enum class PolicyKind { RlRvo, Baseline };

/// Component swaps used by the ablation study.
enum class Variant {
  RlRvo,           ///< Full model.
  NonRvoObs,       ///< Raw [p, v, R] neighbor blocks instead of cones.
  UniRecurrent,    ///< Single LSTM instead of the BiGRU.
  DistanceReward,  ///< Goal-progress reward instead of the cone reward.
};

std::string to_string(PolicyKind kind);
PolicyKind parse_policy_kind(const std::string& s);
std::string to_string(Variant v);
Variant parse_variant(const std::string& s);

/// Everything one experiment needs; maps one-to-one onto the JSON config file.
struct ExperimentConfig {
  ScenarioConfig scenario;
  SensingConfig sensing;
  KinematicsConfig kinematics;
  RewardParams reward;
  DistanceRewardParams distance_reward;
  double arrival_tol = 0.1;
  std::size_t max_steps = 300;
  nn::NetworkConfig network;
  TrainConfig train;
  SamplerConfig sampler;

  PolicyKind policy = PolicyKind::RlRvo;
  std::string checkpoint;
  Variant variant = Variant::RlRvo;
  std::size_t episodes = 100;
  std::uint64_t seed = 0;
  std::vector<std::size_t> robot_counts;      ///< Empty means scenario.robot_count.
  std::vector<ScenarioKind> scenarios;        ///< Empty means scenario.kind.
  std::vector<Variant> ablation_variants;
  std::map<std::string, std::string> ablation_checkpoints;  ///< Variant name -> checkpoint path.
  bool ablation_train_missing = false;
  std::size_t records = 1;  ///< Episode-record CSVs written per evaluated configuration.

  void validate() const;
  /// World settings with the variant's reward mode applied.
  WorldConfig world() const;
  /// Network settings with the variant's encoder/observation swaps applied.
  nn::NetworkConfig network_for_variant() const;
};

nlohmann::json to_json(const ExperimentConfig& cfg);
/// Missing keys keep their defaults; unknown keys raise ConfigError.
ExperimentConfig experiment_from_json(const nlohmann::json& j);
ExperimentConfig load_experiment(const std::filesystem::path& path);

nlohmann::json to_json(const nn::NetworkConfig& cfg);
nn::NetworkConfig network_config_from_json(const nlohmann::json& j);
nlohmann::json to_json(const ScenarioConfig& cfg);
ScenarioConfig scenario_config_from_json(const nlohmann::json& j);

}  // namespace rvonav

#endif  // RVONAV_CONFIG_HPP_
