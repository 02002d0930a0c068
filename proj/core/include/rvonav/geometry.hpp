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

#ifndef RVONAV_GEOMETRY_HPP_
#define RVONAV_GEOMETRY_HPP_

#include <cstddef>
#include <limits>

#include "rvonav/vec2.hpp"

namespace rvonav {

inline constexpr double kInfiniteTime = std::numeric_limits<double>::infinity();

struct Disc {
  Vec2 center;
  double radius = 0.0;
};

struct Segment {
  Vec2 a;
  Vec2 b;
};

enum class ConeKind { VO, RVO };
enum class SourceKind { Robot, Segment };

struct ConeSource {
  SourceKind kind = SourceKind::Robot;
  std::size_t id = 0;
};

/**
 * @brief Velocity-space cone [apex, left leg, right leg].
 *
 * A velocity v is inside iff cross(v - apex, left_dir) >= 0 and
 * cross(v - apex, right_dir) <= 0. The legs are unit vectors; left_dir is
 * the counter-clockwise leg when looking from the apex into the opening.
 * `overlapping` marks the half-plane sentinel returned for entities that
 * already touch the robot.
 */
struct VoCone {
  Vec2 apex;
  Vec2 left_dir;
  Vec2 right_dir;
  ConeKind kind = ConeKind::VO;
  ConeSource source;
  bool overlapping = false;

  /// The unit direction halfway between the legs.
  Vec2 bisector() const { return normalized(left_dir + right_dir); }
  double half_angle() const;
};

/// VO of `other` as seen by `self`; the apex sits at `other_vel`.
VoCone vo_disc(const Disc& self, const Vec2& self_vel, const Disc& other, const Vec2& other_vel,
               std::size_t source_id = 0);

/// RVO: same legs as vo_disc, apex moved to the mean of both velocities.
VoCone rvo_disc(const Disc& self, const Vec2& self_vel, const Disc& other, const Vec2& other_vel,
                std::size_t source_id = 0);

/// VO of a static zero-thickness segment; `self.radius` inflates it into a capsule.
VoCone vo_segment(const Disc& self, const Segment& seg, std::size_t source_id = 0);

bool contains(const VoCone& cone, const Vec2& v);

/**
 * Smallest t >= 0 at which |rel_pos - t * rel_vel| == combined_radius.
 * rel_pos is obstacle minus self, rel_vel is self minus obstacle. Returns 0
 * when already in contact and kInfiniteTime when no contact ever happens.
 */
double collision_time(const Vec2& rel_pos, const Vec2& rel_vel, double combined_radius);

/// First contact time of a disc of `radius` at `pos` moving at `vel` with a static segment.
double collision_time_segment(const Vec2& pos, const Vec2& vel, const Segment& seg, double radius);

/// 1 / (t_e + offset); an infinite t_e maps to 0.
double reciprocal_risk(double t_e, double offset = 0.2);

Vec2 closest_point_on_segment(const Vec2& p, const Segment& seg);
double distance_to_segment(const Vec2& p, const Segment& seg);

}  // namespace rvonav

#endif  // RVONAV_GEOMETRY_HPP_
