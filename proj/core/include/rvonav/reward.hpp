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

#ifndef RVONAV_REWARD_HPP_
#define RVONAV_REWARD_HPP_

#include <span>

#include "rvonav/observation.hpp"

namespace rvonav {

/// Constants of the piecewise RVO reward.
struct RewardParams {
  double a = 0.3;
  double b = 1.0;
  double c = 0.3;
  double d = 1.2;
  double e = 3.6;
  double f = 0.2;
  double safe_time_hi = 5.0;
  double danger_time_lo = 0.1;
  // Optional terminal terms, off by default.
  double arrival_bonus = 0.0;
  double collision_penalty = 0.0;

  void validate() const;
};

struct RiskSummary {
  bool in_joint_rvo = false;
  double xi = kInfiniteTime;  ///< Minimum expected collision time over sensed entities.
};

RiskSummary assess(std::span<const NeighborInfo> neighbors, const Vec2& v_t);

/**
 * Piecewise reward, first matching branch wins:
 *   outside the joint area or xi > hi   : a - b |v_t - v_des|
 *   inside and xi > lo                  : c - d / (xi + f)
 *   xi <= lo                            : -e / (xi + f)
 */
double rvo_reward(const Vec2& v_t, const Vec2& v_des, const RiskSummary& risk,
                  const RewardParams& p);

/// Goal-progress reward used by the distance-reward ablation.
struct DistanceRewardParams {
  double arrival = 15.0;
  double collision = -15.0;
  double progress_gain = 2.5;
  double spin_penalty = -0.1;
  double spin_threshold = 0.7;  ///< rad/s
};

double distance_reward(double prev_goal_distance, double goal_distance, double angular,
                       bool arrived, bool collided, const DistanceRewardParams& p);

}  // namespace rvonav

#endif  // RVONAV_REWARD_HPP_
