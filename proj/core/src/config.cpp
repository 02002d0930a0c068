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

#include "rvonav/config.hpp"

#include <fstream>
#include <set>

namespace rvonav {

using nlohmann::json;

namespace {

// Reads the keys of one JSON object and rejects anything it did not consume.
class Section {
 public:
  Section(const json& j, std::string name) : j_(j), name_(std::move(name)) {
    if (!j_.is_object()) throw ConfigError("config: '" + name_ + "' must be an object");
  }

  template <typename T>
  void get(const char* key, T& out) {
    seen_.insert(key);
    if (!j_.contains(key)) return;
    try {
      out = j_.at(key).get<T>();
    } catch (const json::exception& e) {
      throw ConfigError("config: " + name_ + "." + key + ": " + e.what());
    }
  }

  template <typename T, typename Parse>
  void get_enum(const char* key, T& out, Parse parse) {
    std::string s;
    get(key, s);
    if (s.empty()) return;
    try {
      out = parse(s);
    } catch (const std::invalid_argument& e) {
      throw ConfigError("config: " + name_ + "." + key + ": " + e.what());
    }
  }

  bool has(const char* key) const { return j_.contains(key); }
  const json& raw(const char* key) {
    seen_.insert(key);
    return j_.at(key);
  }

  void finish() const {
    for (const auto& item : j_.items()) {
      if (!seen_.count(item.key())) {
        throw ConfigError("config: unknown key '" + name_ + "." + item.key() + "'");
      }
    }
  }

 private:
  const json& j_;
  std::string name_;
  std::set<std::string> seen_;
};

json segment_to_json(const Segment& s) { return json::array({s.a.x, s.a.y, s.b.x, s.b.y}); }

Segment segment_from_json(const json& j) {
  if (!j.is_array() || j.size() != 4) {
    throw ConfigError("config: segments are [ax, ay, bx, by] arrays");
  }
  return {{j[0].get<double>(), j[1].get<double>()}, {j[2].get<double>(), j[3].get<double>()}};
}

}  // namespace

void TrainConfig::validate() const {
  if (!(gamma > 0.0 && gamma <= 1.0)) throw ConfigError("train: gamma must be in (0, 1]");
  if (!(lambda >= 0.0 && lambda <= 1.0)) throw ConfigError("train: lambda must be in [0, 1]");
  if (!(clip_eps > 0.0)) throw ConfigError("train: clip_eps must be positive");
  if (!(kl_limit > 0.0)) throw ConfigError("train: kl_limit must be positive");
  if (!(lr_actor > 0.0) || !(lr_critic > 0.0))
    throw ConfigError("train: learning rates must be positive");
  if (steps_per_rollout == 0) throw ConfigError("train: steps_per_rollout must be >= 1");
  if (stage1_robots < 2 || stage2_robots < 2)
    throw ConfigError("train: stages need at least 2 robots");
  if (eval_every == 0) throw ConfigError("train: eval_every must be >= 1");
  if (episode_max_steps == 0) throw ConfigError("train: episode_max_steps must be >= 1");
}

std::string to_string(PolicyKind kind) {
  return kind == PolicyKind::RlRvo ? "rlrvo" : "baseline";
}

PolicyKind parse_policy_kind(const std::string& s) {
  if (s == "rlrvo") return PolicyKind::RlRvo;
  if (s == "baseline") return PolicyKind::Baseline;
  throw std::invalid_argument("unknown policy: " + s);
}

std::string to_string(Variant v) {
  switch (v) {
    case Variant::RlRvo: return "rlrvo";
    case Variant::NonRvoObs: return "nrvo";
    case Variant::UniRecurrent: return "lstm";
    case Variant::DistanceReward: return "distance_reward";
  }
  return "unknown";
}

Variant parse_variant(const std::string& s) {
  if (s == "rlrvo" || s == "none") return Variant::RlRvo;
  if (s == "nrvo") return Variant::NonRvoObs;
  if (s == "lstm") return Variant::UniRecurrent;
  if (s == "distance_reward") return Variant::DistanceReward;
  throw std::invalid_argument("unknown variant: " + s);
}

void ExperimentConfig::validate() const {
  try {
    scenario.validate();
    world().validate();
    sampler.validate();
  } catch (const std::invalid_argument& e) {
    throw ConfigError(std::string("config: ") + e.what());
  }
  train.validate();
  if (episodes < 1) throw ConfigError("config: episodes must be >= 1");
  if (network.hidden == 0 || network.fc == 0) throw ConfigError("network: sizes must be >= 1");
}

WorldConfig ExperimentConfig::world() const {
  WorldConfig w;
  w.sensing = sensing;
  w.kinematics = kinematics;
  w.reward = reward;
  w.distance_reward = distance_reward;
  w.reward_mode = variant == Variant::DistanceReward ? RewardMode::Distance : RewardMode::Rvo;
  w.arrival_tol = arrival_tol;
  w.max_steps = max_steps;
  return w;
}

nn::NetworkConfig ExperimentConfig::network_for_variant() const {
  nn::NetworkConfig n = network;
  if (variant == Variant::NonRvoObs) n.neighbor_encoding = nn::NeighborEncoding::Raw;
  if (variant == Variant::UniRecurrent) n.encoder = nn::EncoderKind::UniLstm;
  return n;
}

json to_json(const nn::NetworkConfig& c) {
  return {{"hidden", c.hidden},
          {"fc", c.fc},
          {"encoder", to_string(c.encoder)},
          {"neighbor_encoding", to_string(c.neighbor_encoding)},
          {"orientation", to_string(c.orientation)},
          {"init_log_std", c.init_log_std},
          {"output_init_scale", c.output_init_scale},
          {"layer_norm_eps", c.layer_norm_eps},
          {"init_seed", c.init_seed}};
}

nn::NetworkConfig network_config_from_json(const json& j) {
  nn::NetworkConfig c;
  Section s(j, "network");
  s.get("hidden", c.hidden);
  s.get("fc", c.fc);
  s.get_enum("encoder", c.encoder, nn::parse_encoder_kind);
  s.get_enum("neighbor_encoding", c.neighbor_encoding, nn::parse_neighbor_encoding);
  s.get_enum("orientation", c.orientation, nn::parse_orientation_encoding);
  s.get("init_log_std", c.init_log_std);
  s.get("output_init_scale", c.output_init_scale);
  s.get("layer_norm_eps", c.layer_norm_eps);
  s.get("init_seed", c.init_seed);
  s.finish();
  return c;
}

json to_json(const ScenarioConfig& c) {
  json segs = json::array();
  for (const Segment& seg : c.segments) segs.push_back(segment_to_json(seg));
  return {{"kind", to_string(c.kind)},
          {"robot_count", c.robot_count},
          {"world_width", c.world_width},
          {"world_height", c.world_height},
          {"circle_radius", c.circle_radius},
          {"min_separation", c.min_separation},
          {"corridor_length", c.corridor_length},
          {"corridor_width", c.corridor_width},
          {"robot_radius", c.robot_radius},
          {"collision_radius", c.collision_radius},
          {"segments", segs},
          {"rng_seed", c.rng_seed}};
}

ScenarioConfig scenario_config_from_json(const json& j) {
  ScenarioConfig c;
  Section s(j, "scenario");
  s.get_enum("kind", c.kind, parse_scenario_kind);
  s.get("robot_count", c.robot_count);
  s.get("world_width", c.world_width);
  s.get("world_height", c.world_height);
  s.get("circle_radius", c.circle_radius);
  s.get("min_separation", c.min_separation);
  s.get("corridor_length", c.corridor_length);
  s.get("corridor_width", c.corridor_width);
  s.get("robot_radius", c.robot_radius);
  s.get("collision_radius", c.collision_radius);
  if (s.has("segments")) {
    for (const json& seg : s.raw("segments")) c.segments.push_back(segment_from_json(seg));
  }
  s.get("rng_seed", c.rng_seed);
  s.finish();
  return c;
}

json to_json(const ExperimentConfig& c) {
  json j;
  j["scenario"] = to_json(c.scenario);
  j["sensing"] = {{"range", c.sensing.range},
                  {"max_neighbors", c.sensing.max_neighbors},
                  {"risk_offset", c.sensing.risk_offset}};
  j["kinematics"] = {{"tau", c.kinematics.tau},
                     {"dt", c.kinematics.dt},
                     {"v_min", c.kinematics.v_min},
                     {"v_max", c.kinematics.v_max},
                     {"mu", c.kinematics.mu},
                     {"clip", c.kinematics.clip == VelocityClip::Box ? "box" : "norm"}};
  j["reward"] = {{"a", c.reward.a},
                 {"b", c.reward.b},
                 {"c", c.reward.c},
                 {"d", c.reward.d},
                 {"e", c.reward.e},
                 {"f", c.reward.f},
                 {"safe_time_hi", c.reward.safe_time_hi},
                 {"danger_time_lo", c.reward.danger_time_lo},
                 {"arrival_bonus", c.reward.arrival_bonus},
                 {"collision_penalty", c.reward.collision_penalty}};
  j["distance_reward"] = {{"arrival", c.distance_reward.arrival},
                          {"collision", c.distance_reward.collision},
                          {"progress_gain", c.distance_reward.progress_gain},
                          {"spin_penalty", c.distance_reward.spin_penalty},
                          {"spin_threshold", c.distance_reward.spin_threshold}};
  j["world"] = {{"arrival_tol", c.arrival_tol}, {"max_steps", c.max_steps}};
  j["network"] = to_json(c.network);
  const TrainConfig& t = c.train;
  j["train"] = {{"steps_per_rollout", t.steps_per_rollout},
                {"policy_iters", t.policy_iters},
                {"value_iters", t.value_iters},
                {"kl_limit", t.kl_limit},
                {"lr_actor", t.lr_actor},
                {"lr_critic", t.lr_critic},
                {"gamma", t.gamma},
                {"lambda", t.lambda},
                {"clip_eps", t.clip_eps},
                {"normalize_advantages", t.normalize_advantages},
                {"adam_beta1", t.adam_beta1},
                {"adam_beta2", t.adam_beta2},
                {"adam_eps", t.adam_eps},
                {"stage1_epochs", t.stage1_epochs},
                {"stage2_epochs", t.stage2_epochs},
                {"stage1_robots", t.stage1_robots},
                {"stage2_robots", t.stage2_robots},
                {"episode_max_steps", t.episode_max_steps},
                {"eval_episodes", t.eval_episodes},
                {"eval_every", t.eval_every},
                {"stop_threshold", t.stop_threshold},
                {"patience", t.patience},
                {"checkpoint_every", t.checkpoint_every},
                {"seed", t.seed},
                {"record_wall_time", t.record_wall_time}};
  j["sampler"] = {{"sample_count", c.sampler.sample_count},
                  {"candidate_radius", c.sampler.candidate_radius},
                  {"penalty_weight", c.sampler.penalty_weight},
                  {"time_cap", c.sampler.time_cap},
                  {"seed", c.sampler.seed}};
  j["policy"] = to_string(c.policy);
  j["checkpoint"] = c.checkpoint;
  j["variant"] = to_string(c.variant);
  j["episodes"] = c.episodes;
  j["seed"] = c.seed;
  j["robot_counts"] = c.robot_counts;
  json kinds = json::array();
  for (ScenarioKind k : c.scenarios) kinds.push_back(to_string(k));
  j["scenarios"] = kinds;
  json variants = json::array();
  for (Variant v : c.ablation_variants) variants.push_back(to_string(v));
  j["ablation"] = {{"variants", variants},
                   {"checkpoints", c.ablation_checkpoints},
                   {"train_missing", c.ablation_train_missing}};
  j["records"] = c.records;
  return j;
}

ExperimentConfig experiment_from_json(const json& j) {
  ExperimentConfig c;
  Section top(j, "<root>");
  if (top.has("scenario")) c.scenario = scenario_config_from_json(top.raw("scenario"));
  if (top.has("sensing")) {
    Section s(top.raw("sensing"), "sensing");
    s.get("range", c.sensing.range);
    s.get("max_neighbors", c.sensing.max_neighbors);
    s.get("risk_offset", c.sensing.risk_offset);
    s.finish();
  }
  if (top.has("kinematics")) {
    Section s(top.raw("kinematics"), "kinematics");
    s.get("tau", c.kinematics.tau);
    s.get("dt", c.kinematics.dt);
    s.get("v_min", c.kinematics.v_min);
    s.get("v_max", c.kinematics.v_max);
    s.get("mu", c.kinematics.mu);
    s.get_enum("clip", c.kinematics.clip, [](const std::string& v) {
      if (v == "box") return VelocityClip::Box;
      if (v == "norm") return VelocityClip::Norm;
      throw std::invalid_argument("unknown clip mode: " + v);
    });
    s.finish();
  }
  if (top.has("reward")) {
    Section s(top.raw("reward"), "reward");
    s.get("a", c.reward.a);
    s.get("b", c.reward.b);
    s.get("c", c.reward.c);
    s.get("d", c.reward.d);
    s.get("e", c.reward.e);
    s.get("f", c.reward.f);
    s.get("safe_time_hi", c.reward.safe_time_hi);
    s.get("danger_time_lo", c.reward.danger_time_lo);
    s.get("arrival_bonus", c.reward.arrival_bonus);
    s.get("collision_penalty", c.reward.collision_penalty);
    s.finish();
  }
  if (top.has("distance_reward")) {
    Section s(top.raw("distance_reward"), "distance_reward");
    s.get("arrival", c.distance_reward.arrival);
    s.get("collision", c.distance_reward.collision);
    s.get("progress_gain", c.distance_reward.progress_gain);
    s.get("spin_penalty", c.distance_reward.spin_penalty);
    s.get("spin_threshold", c.distance_reward.spin_threshold);
    s.finish();
  }
  if (top.has("world")) {
    Section s(top.raw("world"), "world");
    s.get("arrival_tol", c.arrival_tol);
    s.get("max_steps", c.max_steps);
    s.finish();
  }
  if (top.has("network")) c.network = network_config_from_json(top.raw("network"));
  if (top.has("train")) {
    TrainConfig& t = c.train;
    Section s(top.raw("train"), "train");
    s.get("steps_per_rollout", t.steps_per_rollout);
    s.get("policy_iters", t.policy_iters);
    s.get("value_iters", t.value_iters);
    s.get("kl_limit", t.kl_limit);
    s.get("lr_actor", t.lr_actor);
    s.get("lr_critic", t.lr_critic);
    s.get("gamma", t.gamma);
    s.get("lambda", t.lambda);
    s.get("clip_eps", t.clip_eps);
    s.get("normalize_advantages", t.normalize_advantages);
    s.get("adam_beta1", t.adam_beta1);
    s.get("adam_beta2", t.adam_beta2);
    s.get("adam_eps", t.adam_eps);
    s.get("stage1_epochs", t.stage1_epochs);
    s.get("stage2_epochs", t.stage2_epochs);
    s.get("stage1_robots", t.stage1_robots);
    s.get("stage2_robots", t.stage2_robots);
    s.get("episode_max_steps", t.episode_max_steps);
    s.get("eval_episodes", t.eval_episodes);
    s.get("eval_every", t.eval_every);
    s.get("stop_threshold", t.stop_threshold);
    s.get("patience", t.patience);
    s.get("checkpoint_every", t.checkpoint_every);
    s.get("seed", t.seed);
    s.get("record_wall_time", t.record_wall_time);
    s.finish();
  }
  if (top.has("sampler")) {
    Section s(top.raw("sampler"), "sampler");
    s.get("sample_count", c.sampler.sample_count);
    s.get("candidate_radius", c.sampler.candidate_radius);
    s.get("penalty_weight", c.sampler.penalty_weight);
    s.get("time_cap", c.sampler.time_cap);
    s.get("seed", c.sampler.seed);
    s.finish();
  }
  top.get_enum("policy", c.policy, parse_policy_kind);
  top.get("checkpoint", c.checkpoint);
  top.get_enum("variant", c.variant, parse_variant);
  top.get("episodes", c.episodes);
  top.get("seed", c.seed);
  top.get("robot_counts", c.robot_counts);
  if (top.has("scenarios")) {
    for (const json& k : top.raw("scenarios")) {
      try {
        c.scenarios.push_back(parse_scenario_kind(k.get<std::string>()));
      } catch (const std::exception& e) {
        throw ConfigError(std::string("config: scenarios: ") + e.what());
      }
    }
  }
  if (top.has("ablation")) {
    Section s(top.raw("ablation"), "ablation");
    if (s.has("variants")) {
      for (const json& v : s.raw("variants")) {
        try {
          c.ablation_variants.push_back(parse_variant(v.get<std::string>()));
        } catch (const std::exception& e) {
          throw ConfigError(std::string("config: ablation.variants: ") + e.what());
        }
      }
    }
    s.get("checkpoints", c.ablation_checkpoints);
    s.get("train_missing", c.ablation_train_missing);
    s.finish();
  }
  top.get("records", c.records);
  top.finish();
  c.validate();
  return c;
}

ExperimentConfig load_experiment(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file: " + path.string());
  json j;
  try {
    in >> j;
  } catch (const json::parse_error& e) {
    throw ConfigError("cannot parse config file " + path.string() + ": " + e.what());
  }
  return experiment_from_json(j);
}

}  // namespace rvonav
