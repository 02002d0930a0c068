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

#ifndef RVONAV_OBSERVATION_HPP_
#define RVONAV_OBSERVATION_HPP_

#include <array>
#include <cstddef>
#include <vector>

#include "rvonav/geometry.hpp"

namespace rvonav {

inline constexpr std::size_t kSelfBlockSize = 6;
inline constexpr std::size_t kConeBlockSize = 8;
inline constexpr std::size_t kRawBlockSize = 5;

/// One sensed entity: its cone plus the quantities derived from it.
struct NeighborInfo {
  VoCone cone;
  double distance = 0.0;          ///< Centre distance (robots) or closest-point distance (segments).
  double collision_time = kInfiniteTime;
  double risk = 0.0;              ///< reciprocal_risk(collision_time)
  Vec2 rel_pos;                   ///< Other minus self; closest point for segments.
  Vec2 rel_vel;                   ///< Other velocity minus self velocity.
  Vec2 other_vel;                 ///< Absolute velocity of the other entity.
  double other_radius = 0.0;      ///< Collision radius of the other robot, 0 for segments.
  bool is_segment = false;
  Segment segment;                ///< Segment in the sensing robot's frame (segments only).

  /// [apex, left, right, d, r_e]
  std::array<double, kConeBlockSize> cone_block() const;
  /// [p_x, p_y, v_x, v_y, R] relative to the sensing robot.
  std::array<double, kRawBlockSize> raw_block() const;
};

struct Observation {
  /// [v_x, v_y, orientation, v_des_x, v_des_y, R_c]
  std::array<double, kSelfBlockSize> self_block{};
  std::vector<NeighborInfo> neighbors;

  Vec2 velocity() const { return {self_block[0], self_block[1]}; }
  double orientation() const { return self_block[2]; }
  Vec2 desired_velocity() const { return {self_block[3], self_block[4]}; }
};

/// Ascending risk, ties broken by descending distance.
bool neighbor_order(const NeighborInfo& lhs, const NeighborInfo& rhs);

/// True iff the neighbor sequence satisfies neighbor_order.
bool ordering_holds(const Observation& obs);

}  // namespace rvonav

#endif  // RVONAV_OBSERVATION_HPP_
