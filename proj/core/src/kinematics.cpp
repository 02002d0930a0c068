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

#include "rvonav/kinematics.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace rvonav {

void KinematicsConfig::validate() const {
  if (!(tau > 0.0)) throw std::invalid_argument("kinematics: tau must be positive");
  if (!(dt > 0.0)) throw std::invalid_argument("kinematics: dt must be positive");
  if (!(v_min < v_max)) throw std::invalid_argument("kinematics: v_min must be below v_max");
  if (!(mu > 0.0)) throw std::invalid_argument("kinematics: mu must be positive");
}

Vec2 clip_velocity(const Vec2& v, const KinematicsConfig& cfg) {
  if (cfg.clip == VelocityClip::Norm) {
    const double speed = norm(v);
    return speed > cfg.v_max ? v * (cfg.v_max / speed) : v;
  }
  return {std::clamp(v.x, cfg.v_min, cfg.v_max), std::clamp(v.y, cfg.v_min, cfg.v_max)};
}

Vec2 apply_increment(const Vec2& v_prev, const Vec2& action, const KinematicsConfig& cfg) {
  return clip_velocity(v_prev + action * cfg.mu, cfg);
}

double heading_error(const Vec2& v, double orientation) {
  return wrap_angle(orientation - heading(v));
}

DiffDriveCommand to_diff_drive(const Vec2& v, double orientation, const KinematicsConfig& cfg) {
  const double speed = norm(v);
  if (speed < 1e-9) return {};
  const double err = heading_error(v, orientation);
  return {speed * std::cos(err), -err / cfg.tau};
}

RobotState integrate(const RobotState& state, const DiffDriveCommand& cmd,
                     const KinematicsConfig& cfg) {
  RobotState next = state;
  next.orientation = wrap_angle(state.orientation + cmd.angular * cfg.dt);
  const Vec2 dir{std::cos(next.orientation), std::sin(next.orientation)};
  next.velocity = dir * cmd.linear;
  next.position = state.position + next.velocity * cfg.dt;
  return next;
}

}  // namespace rvonav
