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

#include "rvonav/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace rvonav {

namespace {

struct Legs {
  Vec2 left;
  Vec2 right;
  bool overlapping = false;
};

// Tangent directions from the origin to a disc of `radius` centred at `rel`.
Legs tangent_legs(const Vec2& rel, double radius) {
  const double dist = norm(rel);
  const Vec2 axis = dist > 0.0 ? rel / dist : Vec2{1.0, 0.0};
  if (dist <= radius) {
    // Half-plane sentinel: legs perpendicular to the centre line.
    return {perp_ccw(axis), -perp_ccw(axis), true};
  }
  const double s = radius / dist;
  const double c = std::sqrt((dist - radius) * (dist + radius)) / dist;
  const Vec2 left{c * axis.x - s * axis.y, s * axis.x + c * axis.y};
  const Vec2 right{c * axis.x + s * axis.y, -s * axis.x + c * axis.y};
  return {normalized(left), normalized(right), false};
}

VoCone make_cone(const Vec2& apex, const Legs& legs, ConeKind kind, SourceKind source,
                 std::size_t id) {
  VoCone cone;
  cone.apex = apex;
  cone.left_dir = legs.left;
  cone.right_dir = legs.right;
  cone.kind = kind;
  cone.source = {source, id};
  cone.overlapping = legs.overlapping;
  return cone;
}

}  // namespace

double VoCone::half_angle() const {
  return 0.5 * std::atan2(std::abs(cross(right_dir, left_dir)), dot(right_dir, left_dir));
}

VoCone vo_disc(const Disc& self, const Vec2& /*self_vel*/, const Disc& other, const Vec2& other_vel,
               std::size_t source_id) {
  const Legs legs = tangent_legs(other.center - self.center, self.radius + other.radius);
  return make_cone(other_vel, legs, ConeKind::VO, SourceKind::Robot, source_id);
}

VoCone rvo_disc(const Disc& self, const Vec2& self_vel, const Disc& other, const Vec2& other_vel,
                std::size_t source_id) {
  const Legs legs = tangent_legs(other.center - self.center, self.radius + other.radius);
  return make_cone((self_vel + other_vel) * 0.5, legs, ConeKind::RVO, SourceKind::Robot,
                   source_id);
}

VoCone vo_segment(const Disc& self, const Segment& seg, std::size_t source_id) {
  const Vec2 nearest = closest_point_on_segment(self.center, seg) - self.center;
  const double gap = norm(nearest);
  if (gap <= self.radius) {
    return make_cone({}, tangent_legs(nearest, self.radius), ConeKind::VO, SourceKind::Segment,
                     source_id);
  }
  // The capsule is convex and the robot is outside it, so every tangent
  // direction lies within (-pi, pi) of the direction to the nearest point.
  const Vec2 axis = nearest / gap;
  auto signed_angle = [&](const Vec2& d) { return std::atan2(cross(axis, d), dot(axis, d)); };

  Legs best{};
  double max_angle = -std::numbers::pi;
  double min_angle = std::numbers::pi;
  for (const Vec2& end : {seg.a, seg.b}) {
    const Legs legs = tangent_legs(end - self.center, self.radius);
    const double la = signed_angle(legs.left);
    const double ra = signed_angle(legs.right);
    if (la > max_angle) {
      max_angle = la;
      best.left = legs.left;
    }
    if (ra < min_angle) {
      min_angle = ra;
      best.right = legs.right;
    }
  }
  return make_cone({}, best, ConeKind::VO, SourceKind::Segment, source_id);
}

bool contains(const VoCone& cone, const Vec2& v) {
  const Vec2 rel = v - cone.apex;
  return cross(rel, cone.left_dir) >= 0.0 && cross(rel, cone.right_dir) <= 0.0;
}

double collision_time(const Vec2& rel_pos, const Vec2& rel_vel, double combined_radius) {
  const double c = squared_norm(rel_pos) - combined_radius * combined_radius;
  if (c <= 0.0) return 0.0;
  const double a = squared_norm(rel_vel);
  const double closing = dot(rel_pos, rel_vel);
  if (a == 0.0 || closing <= 0.0) return kInfiniteTime;
  const double disc = closing * closing - a * c;
  if (disc < 0.0) return kInfiniteTime;
  // Smaller root of a t^2 - 2 closing t + c = 0, in the cancellation-free form.
  return c / (closing + std::sqrt(disc));
}

double collision_time_segment(const Vec2& pos, const Vec2& vel, const Segment& seg,
                              double radius) {
  if (distance_to_segment(pos, seg) <= radius) return 0.0;
  double best = std::min(collision_time(seg.a - pos, vel, radius),
                         collision_time(seg.b - pos, vel, radius));
  const Vec2 along = seg.b - seg.a;
  const double length = norm(along);
  if (length == 0.0) return best;
  const Vec2 dir = along / length;
  const Vec2 normal = perp_ccw(dir);
  const double offset = dot(pos - seg.a, normal);
  const double approach = dot(vel, normal);
  if (offset * approach < 0.0 && std::abs(offset) > radius) {
    const double t = (std::abs(offset) - radius) / std::abs(approach);
    const double s = dot(pos + vel * t - seg.a, dir);
    if (s >= 0.0 && s <= length) best = std::min(best, t);
  }
  return best;
}

double reciprocal_risk(double t_e, double offset) {
  if (std::isinf(t_e)) return 0.0;
  return 1.0 / (t_e + offset);
}

Vec2 closest_point_on_segment(const Vec2& p, const Segment& seg) {
  const Vec2 along = seg.b - seg.a;
  const double len2 = squared_norm(along);
  if (len2 == 0.0) return seg.a;
  const double s = std::clamp(dot(p - seg.a, along) / len2, 0.0, 1.0);
  return seg.a + along * s;
}

double distance_to_segment(const Vec2& p, const Segment& seg) {
  return norm(p - closest_point_on_segment(p, seg));
}

}  // namespace rvonav
