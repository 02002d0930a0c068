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

#ifndef RVONAV_KINEMATICS_HPP_
#define RVONAV_KINEMATICS_HPP_

#include "rvonav/robot_state.hpp"
#include "rvonav/vec2.hpp"

namespace rvonav {

enum class VelocityClip {
  Box,   ///< Each component clipped to [v_min, v_max].
  Norm,  ///< Speed clipped to v_max.
};

struct KinematicsConfig {
  double tau = 0.2;  ///< Rotation settling time (s).
  double dt = 0.1;   ///< Simulation step (s).
  double v_min = -1.5;
  double v_max = 1.5;
  double mu = 1.0;  ///< Action scale.
  VelocityClip clip = VelocityClip::Box;

  void validate() const;
};

struct DiffDriveCommand {
  double linear = 0.0;   ///< m/s
  double angular = 0.0;  ///< rad/s
};

/// v_prev + mu * action, clipped to the configured velocity bounds.
Vec2 apply_increment(const Vec2& v_prev, const Vec2& action, const KinematicsConfig& cfg);

Vec2 clip_velocity(const Vec2& v, const KinematicsConfig& cfg);

/// Angle from the velocity heading to the robot heading, wrapped to (-pi, pi].
double heading_error(const Vec2& v, double orientation);

/**
 * Converts a holonomic velocity into unicycle controls:
 * linear = |v| cos(err), angular = -err / tau, where err is heading_error().
 */
DiffDriveCommand to_diff_drive(const Vec2& v, double orientation, const KinematicsConfig& cfg);

/// Rotate first, then translate along the new heading.
RobotState integrate(const RobotState& state, const DiffDriveCommand& cmd,
                     const KinematicsConfig& cfg);

}  // namespace rvonav

#endif  // RVONAV_KINEMATICS_HPP_
