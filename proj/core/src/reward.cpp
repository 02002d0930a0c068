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

#include "rvonav/reward.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace rvonav {

void RewardParams::validate() const {
  if (!(f > 0.0)) throw std::invalid_argument("reward: f must be positive");
  if (!(danger_time_lo < safe_time_hi))
    throw std::invalid_argument("reward: danger_time_lo must be below safe_time_hi");
}

RiskSummary assess(std::span<const NeighborInfo> neighbors, const Vec2& v_t) {
  RiskSummary risk;
  for (const NeighborInfo& n : neighbors) {
    risk.in_joint_rvo = risk.in_joint_rvo || contains(n.cone, v_t);
    risk.xi = std::min(risk.xi, n.collision_time);
  }
  return risk;
}

double rvo_reward(const Vec2& v_t, const Vec2& v_des, const RiskSummary& risk,
                  const RewardParams& p) {
  if (!risk.in_joint_rvo || risk.xi > p.safe_time_hi) return p.a - p.b * norm(v_t - v_des);
  if (risk.xi > p.danger_time_lo) return p.c - p.d / (risk.xi + p.f);
  return -p.e / (risk.xi + p.f);
}

double distance_reward(double prev_goal_distance, double goal_distance, double angular,
                       bool arrived, bool collided, const DistanceRewardParams& p) {
  if (collided) return p.collision;
  if (arrived) return p.arrival;
  double r = p.progress_gain * (prev_goal_distance - goal_distance);
  if (std::abs(angular) > p.spin_threshold) r += p.spin_penalty * std::abs(angular);
  return r;
}

}  // namespace rvonav
