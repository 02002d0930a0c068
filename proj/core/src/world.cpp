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

#include "rvonav/world.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <utility>

namespace rvonav {

std::string to_string(ScenarioKind kind) {
  switch (kind) {
    case ScenarioKind::Circle: return "circle";
    case ScenarioKind::Random: return "random";
    case ScenarioKind::Corridor: return "corridor";
  }
  return "unknown";
}

ScenarioKind parse_scenario_kind(const std::string& name) {
  if (name == "circle") return ScenarioKind::Circle;
  if (name == "random") return ScenarioKind::Random;
  if (name == "corridor") return ScenarioKind::Corridor;
  throw std::invalid_argument("unknown scenario kind: " + name);
}

std::string to_string(DoneReason reason) {
  switch (reason) {
    case DoneReason::Running: return "running";
    case DoneReason::Arrived: return "arrived";
    case DoneReason::Collision: return "collision";
    case DoneReason::Timeout: return "timeout";
  }
  return "unknown";
}

void ScenarioConfig::validate() const {
  if (robot_count < 2) throw std::invalid_argument("scenario: robot_count must be at least 2");
  if (!(robot_radius > 0.0)) throw std::invalid_argument("scenario: robot_radius must be positive");
  if (collision_radius < robot_radius)
    throw std::invalid_argument("scenario: collision_radius must be >= robot_radius");
  if (!(min_separation > 2.0 * robot_radius))
    throw std::invalid_argument("scenario: min_separation must exceed twice the robot radius");
  for (const Segment& s : segments) {
    if (s.a == s.b) throw std::invalid_argument("scenario: degenerate segment obstacle");
  }
}

void SensingConfig::validate() const {
  if (!(range > 0.0)) throw std::invalid_argument("sensing: range must be positive");
  if (max_neighbors < 1) throw std::invalid_argument("sensing: max_neighbors must be >= 1");
}

void WorldConfig::validate() const {
  sensing.validate();
  kinematics.validate();
  reward.validate();
  if (!(arrival_tol > 0.0)) throw std::invalid_argument("world: arrival_tol must be positive");
  if (max_steps < 1) throw std::invalid_argument("world: max_steps must be >= 1");
}

namespace {

RobotState make_robot(std::size_t id, const Vec2& pos, const Vec2& goal, double orientation,
                      const ScenarioConfig& cfg) {
  RobotState r;
  r.id = id;
  r.position = pos;
  r.goal = goal;
  r.orientation = wrap_angle(orientation);
  r.radius = cfg.robot_radius;
  r.collision_radius = cfg.collision_radius;
  return r;
}

bool far_from_all(const Vec2& p, const std::vector<Vec2>& placed, double min_sep) {
  return std::all_of(placed.begin(), placed.end(),
                     [&](const Vec2& q) { return norm(p - q) >= min_sep; });
}

std::vector<Vec2> sample_separated(std::size_t n, double half_w, double half_h, double min_sep,
                                   std::mt19937_64& rng) {
  std::uniform_real_distribution<double> ux(-half_w, half_w);
  std::uniform_real_distribution<double> uy(-half_h, half_h);
  std::vector<Vec2> placed;
  constexpr int kMaxTries = 10000;
  int tries = 0;
  while (placed.size() < n) {
    if (++tries > kMaxTries) {
      throw PackingError("cannot place " + std::to_string(n) + " robots with separation " +
                         std::to_string(min_sep));
    }
    const Vec2 p{ux(rng), uy(rng)};
    if (far_from_all(p, placed, min_sep)) placed.push_back(p);
  }
  return placed;
}

}  // namespace

Scenario generate_scenario(const ScenarioConfig& cfg) {
  cfg.validate();
  std::mt19937_64 rng(cfg.rng_seed);
  std::uniform_real_distribution<double> heading_dist(-std::numbers::pi, std::numbers::pi);
  Scenario out;
  const std::size_t n = cfg.robot_count;

  switch (cfg.kind) {
    case ScenarioKind::Circle: {
      const double spacing = 2.0 * cfg.circle_radius * std::sin(std::numbers::pi / double(n));
      if (spacing < cfg.min_separation) {
        throw PackingError("circle too small for " + std::to_string(n) + " robots");
      }
      for (std::size_t i = 0; i < n; ++i) {
        const double angle = 2.0 * std::numbers::pi * double(i) / double(n);
        const Vec2 pos{cfg.circle_radius * std::cos(angle), cfg.circle_radius * std::sin(angle)};
        out.robots.push_back(make_robot(i, pos, -pos, heading_dist(rng), cfg));
      }
      break;
    }
    case ScenarioKind::Random: {
      const double margin = cfg.collision_radius;
      const double hw = 0.5 * cfg.world_width - margin;
      const double hh = 0.5 * cfg.world_height - margin;
      const auto starts = sample_separated(n, hw, hh, cfg.min_separation, rng);
      const auto goals = sample_separated(n, hw, hh, cfg.min_separation, rng);
      for (std::size_t i = 0; i < n; ++i) {
        out.robots.push_back(make_robot(i, starts[i], goals[i], heading_dist(rng), cfg));
      }
      break;
    }
    case ScenarioKind::Corridor: {
      // Two facing groups packed in columns at the corridor ends.
      const double hl = 0.5 * cfg.corridor_length;
      const double hw = 0.5 * cfg.corridor_width;
      const double usable = 2.0 * (hw - cfg.collision_radius - 0.2);
      const auto rows = std::max<std::size_t>(1, std::size_t(usable / cfg.min_separation) + 1);
      const std::size_t left_count = (n + 1) / 2;
      auto slot = [&](std::size_t k) {
        const std::size_t col = k / rows;
        const std::size_t row = k % rows;
        const double y = rows == 1 ? 0.0 : -0.5 * usable + usable * double(row) / double(rows - 1);
        const double x = -hl + 0.5 + cfg.min_separation * double(col);
        return Vec2{x, y};
      };
      for (std::size_t i = 0; i < n; ++i) {
        const bool left = i < left_count;
        const Vec2 s = slot(left ? i : i - left_count);
        const Vec2 start = left ? s : Vec2{-s.x, s.y};
        const Vec2 goal{-start.x, start.y};
        if (std::abs(start.x) > hl) throw PackingError("corridor too short for robot count");
        out.robots.push_back(make_robot(i, start, goal, heading_dist(rng), cfg));
      }
      out.segments.push_back({{-hl, hw}, {hl, hw}});
      out.segments.push_back({{-hl, -hw}, {hl, -hw}});
      break;
    }
  }
  out.segments.insert(out.segments.end(), cfg.segments.begin(), cfg.segments.end());
  return out;
}

Vec2 desired_velocity(const RobotState& state, double v_max, double dt) {
  if (state.arrived) return {};
  const Vec2 to_goal = state.goal - state.position;
  const double dist = norm(to_goal);
  if (dist < 1e-12) return {};
  return to_goal * (std::min(v_max, dist / dt) / dist);
}

World::World(WorldConfig cfg, Scenario scenario)
    : cfg_(std::move(cfg)), robots_(std::move(scenario.robots)),
      segments_(std::move(scenario.segments)) {
  cfg_.validate();
  for (std::size_t i = 0; i < robots_.size(); ++i) robots_[i].id = i;
}

Vec2 World::desired_velocity(std::size_t robot_id) const {
  return rvonav::desired_velocity(robots_.at(robot_id), cfg_.kinematics.v_max,
                                  cfg_.kinematics.dt);
}

Observation World::sense(std::size_t robot_id) const {
  const RobotState& self = robots_.at(robot_id);
  const Disc self_disc{self.position, self.collision_radius};
  const Vec2 v_des = desired_velocity(robot_id);

  Observation obs;
  obs.self_block = {self.command.x, self.command.y, self.orientation,
                    v_des.x,        v_des.y,        self.collision_radius};

  for (const RobotState& other : robots_) {
    if (other.id == self.id || other.arrived) continue;
    const Vec2 rel = other.position - self.position;
    const double dist = norm(rel);
    if (dist > cfg_.sensing.range) continue;
    NeighborInfo n;
    n.cone = rvo_disc(self_disc, self.velocity, {other.position, other.collision_radius},
                      other.velocity, other.id);
    n.distance = dist;
    n.collision_time =
        collision_time(rel, self.velocity - other.velocity,
                       self.collision_radius + other.collision_radius);
    n.risk = reciprocal_risk(n.collision_time, cfg_.sensing.risk_offset);
    n.rel_pos = rel;
    n.rel_vel = other.velocity - self.velocity;
    n.other_vel = other.velocity;
    n.other_radius = other.collision_radius;
    obs.neighbors.push_back(n);
  }
  for (std::size_t s = 0; s < segments_.size(); ++s) {
    const Segment& seg = segments_[s];
    const Vec2 nearest = closest_point_on_segment(self.position, seg);
    const double dist = norm(nearest - self.position);
    if (dist > cfg_.sensing.range) continue;
    NeighborInfo n;
    n.cone = vo_segment(self_disc, seg, s);
    n.distance = dist;
    n.collision_time =
        collision_time_segment(self.position, self.velocity, seg, self.collision_radius);
    n.risk = reciprocal_risk(n.collision_time, cfg_.sensing.risk_offset);
    n.rel_pos = nearest - self.position;
    n.rel_vel = -self.velocity;
    n.other_radius = 0.0;
    n.is_segment = true;
    n.segment = {seg.a - self.position, seg.b - self.position};
    obs.neighbors.push_back(n);
  }

  auto& nb = obs.neighbors;
  if (nb.size() > cfg_.sensing.max_neighbors) {
    std::stable_sort(nb.begin(), nb.end(), [](const NeighborInfo& l, const NeighborInfo& r) {
      return l.distance < r.distance;
    });
    nb.resize(cfg_.sensing.max_neighbors);
  }
  std::stable_sort(nb.begin(), nb.end(), neighbor_order);
  return obs;
}

std::vector<Observation> World::sense_all() const {
  std::vector<Observation> out;
  out.reserve(robots_.size());
  for (std::size_t i = 0; i < robots_.size(); ++i) out.push_back(sense(i));
  return out;
}

bool World::in_collision(std::size_t i) const {
  const RobotState& self = robots_[i];
  for (const RobotState& other : robots_) {
    if (other.id == self.id || other.arrived) continue;
    if (norm(other.position - self.position) <= self.collision_radius + other.collision_radius)
      return true;
  }
  for (const Segment& seg : segments_) {
    if (distance_to_segment(self.position, seg) <= self.collision_radius) return true;
  }
  return false;
}

StepOutcome World::step(std::span<const Vec2> actions) {
  if (actions.size() != robots_.size()) {
    throw std::invalid_argument("world step: expected one action per robot");
  }
  const KinematicsConfig& kin = cfg_.kinematics;
  const std::size_t n = robots_.size();
  StepOutcome out;
  out.robots.resize(n);

  std::vector<Vec2> v_des(n);
  std::vector<double> prev_goal_dist(n);
  std::vector<double> angular(n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    RobotState& r = robots_[i];
    if (!r.active() || done_) continue;
    out.robots[i].was_active = true;
    v_des[i] = desired_velocity(i);
    prev_goal_dist[i] = norm(r.goal - r.position);
    const Vec2 cmd = apply_increment(r.command, actions[i], kin);
    const DiffDriveCommand dd = to_diff_drive(cmd, r.orientation, kin);
    angular[i] = dd.angular;
    r = integrate(r, dd, kin);
    r.command = cmd;
  }
  if (!done_) ++steps_;

  // Collisions are checked before arrivals so a robot cannot escape a
  // contact by arriving on the same step.
  std::vector<bool> hit(n, false);
  for (std::size_t i = 0; i < n; ++i) {
    if (out.robots[i].was_active) hit[i] = in_collision(i);
  }
  bool any_collision = false;
  for (std::size_t i = 0; i < n; ++i) {
    RobotState& r = robots_[i];
    if (!out.robots[i].was_active) continue;
    if (hit[i]) {
      r.collided = true;
      r.velocity = {};
      any_collision = true;
      out.robots[i].done = true;
      out.robots[i].reason = DoneReason::Collision;
    } else if (norm(r.goal - r.position) < cfg_.arrival_tol) {
      r.arrived = true;
      out.robots[i].done = true;
      out.robots[i].reason = DoneReason::Arrived;
    }
  }

  const bool timed_out = steps_ >= cfg_.max_steps;
  if (timed_out) {
    for (std::size_t i = 0; i < n; ++i) {
      if (out.robots[i].was_active && !out.robots[i].done) {
        out.robots[i].done = true;
        out.robots[i].reason = DoneReason::Timeout;
      }
    }
  }

  out.observations = sense_all();
  for (std::size_t i = 0; i < n; ++i) {
    RobotOutcome& o = out.robots[i];
    if (!o.was_active) continue;
    const RobotState& r = robots_[i];
    if (cfg_.reward_mode == RewardMode::Rvo) {
      const RiskSummary risk = assess(out.observations[i].neighbors, r.command);
      o.reward = rvo_reward(r.command, v_des[i], risk, cfg_.reward);
      if (o.reason == DoneReason::Arrived) o.reward += cfg_.reward.arrival_bonus;
      if (o.reason == DoneReason::Collision) o.reward -= cfg_.reward.collision_penalty;
    } else {
      o.reward = distance_reward(prev_goal_dist[i], norm(r.goal - r.position), angular[i],
                                 o.reason == DoneReason::Arrived,
                                 o.reason == DoneReason::Collision, cfg_.distance_reward);
    }
  }

  const bool all_inactive =
      std::none_of(robots_.begin(), robots_.end(), [](const RobotState& r) { return r.active(); });
  done_ = done_ || any_collision || timed_out || all_inactive;
  out.episode_done = done_;
  return out;
}

}  // namespace rvonav
