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

#ifndef RVONAV_ROBOT_STATE_HPP_
#define RVONAV_ROBOT_STATE_HPP_

#include <cstddef>

#include "rvonav/vec2.hpp"

namespace rvonav {

struct RobotState {
  std::size_t id = 0;
  Vec2 position;
  double orientation = 0.0;  ///< (-pi, pi]
  Vec2 velocity;             ///< Actual world-frame velocity after the last step.
  Vec2 command;              ///< Holonomic velocity the policy integrates increments into.
  double radius = 0.2;
  double collision_radius = 0.3;
  Vec2 goal;
  bool arrived = false;
  bool collided = false;

  bool active() const { return !arrived && !collided; }
};

}  // namespace rvonav

#endif  // RVONAV_ROBOT_STATE_HPP_
