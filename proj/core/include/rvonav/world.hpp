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

#ifndef RVONAV_WORLD_HPP_
#define RVONAV_WORLD_HPP_

#include <cstddef>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "rvonav/geometry.hpp"
#include "rvonav/kinematics.hpp"
#include "rvonav/observation.hpp"
#include "rvonav/reward.hpp"
#include "rvonav/robot_state.hpp"

namespace rvonav {

enum class ScenarioKind { Circle, Random, Corridor };

std::string to_string(ScenarioKind kind);
ScenarioKind parse_scenario_kind(const std::string& name);

struct ScenarioConfig {
  ScenarioKind kind = ScenarioKind::Circle;
  std::size_t robot_count = 4;
  double world_width = 10.0;   ///< Random scenario sampling area (m).
  double world_height = 10.0;
  double circle_radius = 4.5;
  double min_separation = 1.0;
  double corridor_length = 10.0;
  double corridor_width = 4.0;
  double robot_radius = 0.2;
  double collision_radius = 0.3;
  std::vector<Segment> segments;  ///< Extra static obstacles added to any scenario.
  std::uint64_t rng_seed = 0;

  void validate() const;
};

struct SensingConfig {
  double range = 4.0;
  std::size_t max_neighbors = 5;
  double risk_offset = 0.2;

  void validate() const;
};

enum class RewardMode { Rvo, Distance };

struct WorldConfig {
  SensingConfig sensing;
  KinematicsConfig kinematics;
  RewardParams reward;
  RewardMode reward_mode = RewardMode::Rvo;
  DistanceRewardParams distance_reward;
  double arrival_tol = 0.1;
  std::size_t max_steps = 300;

  void validate() const;
};

class PackingError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct Scenario {
  std::vector<RobotState> robots;
  std::vector<Segment> segments;
};

/// Builds start/goal layouts. Throws PackingError when rejection sampling gives up.
Scenario generate_scenario(const ScenarioConfig& cfg);

/// Full-speed velocity straight at the goal, capped so the goal is reached exactly.
Vec2 desired_velocity(const RobotState& state, double v_max, double dt);

enum class DoneReason { Running, Arrived, Collision, Timeout };

std::string to_string(DoneReason reason);

struct RobotOutcome {
  double reward = 0.0;
  bool done = false;  ///< Robot reached a terminal state this step.
  DoneReason reason = DoneReason::Running;
  bool was_active = false;  ///< Robot acted this step.
};

struct StepOutcome {
  std::vector<Observation> observations;
  std::vector<RobotOutcome> robots;
  bool episode_done = false;
};

/**
 * @brief Multi-robot world stepped in lock-step.
 *
 * Arrived robots are removed from everyone's sensing. A single collision
 * ends the episode for all robots.
 */
class World {
 public:
  World(WorldConfig cfg, Scenario scenario);

  const WorldConfig& config() const { return cfg_; }
  const std::vector<RobotState>& robots() const { return robots_; }
  const std::vector<Segment>& segments() const { return segments_; }
  std::size_t step_count() const { return steps_; }
  bool done() const { return done_; }

  Observation sense(std::size_t robot_id) const;
  std::vector<Observation> sense_all() const;
  Vec2 desired_velocity(std::size_t robot_id) const;

  /// One velocity increment per robot, indexed by robot id; inactive entries are ignored.
  StepOutcome step(std::span<const Vec2> actions);

 private:
  bool in_collision(std::size_t i) const;

  WorldConfig cfg_;
  std::vector<RobotState> robots_;
  std::vector<Segment> segments_;
  std::size_t steps_ = 0;
  bool done_ = false;
};

}  // namespace rvonav

#endif  // RVONAV_WORLD_HPP_
