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

#include "rvonav/baseline.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <vector>

#include "rvonav/geometry.hpp"

namespace rvonav {

void SamplerConfig::validate() const {
  if (sample_count < 50) throw std::invalid_argument("sampler: sample_count must be >= 50");
  if (!(candidate_radius > 0.0))
    throw std::invalid_argument("sampler: candidate_radius must be positive");
  if (!(time_cap > 0.0)) throw std::invalid_argument("sampler: time_cap must be positive");
}

double candidate_collision_time(const NeighborInfo& n, const Vec2& v, double self_radius) {
  if (n.is_segment) return collision_time_segment({}, v, n.segment, self_radius);
  return collision_time(n.rel_pos, v - n.other_vel, self_radius + n.other_radius);
}

Vec2 select_velocity(std::span<const NeighborInfo> neighbors, const Vec2& v_des,
                     const Vec2& v_current, double self_radius, const SamplerConfig& cfg,
                     std::mt19937_64& rng) {
  const double speed = norm(v_des);
  const Vec2 axis = speed > 0.0 ? v_des / speed : Vec2{1.0, 0.0};

  std::vector<Vec2> candidates{v_des, v_current, Vec2{}};
  candidates.reserve(cfg.sample_count + 3);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (std::size_t i = 0; i < cfg.sample_count; ++i) {
    const double r = cfg.candidate_radius * std::sqrt(unit(rng));
    const double theta = 2.0 * std::numbers::pi * unit(rng);
    const Vec2 local{r * std::cos(theta), r * std::sin(theta)};
    candidates.push_back({axis.x * local.x - axis.y * local.y, axis.y * local.x + axis.x * local.y});
  }

  auto local_angle = [&](const Vec2& v) { return std::atan2(cross(axis, v), dot(axis, v)); };
  auto safe = [&](const Vec2& v) {
    return std::none_of(neighbors.begin(), neighbors.end(),
                        [&](const NeighborInfo& n) { return contains(n.cone, v); });
  };

  const Vec2* best = nullptr;
  double best_dist = std::numeric_limits<double>::infinity();
  double best_angle = 0.0;
  for (const Vec2& v : candidates) {
    if (!safe(v)) continue;
    const double d = norm(v - v_des);
    const double a = local_angle(v);
    if (d < best_dist || (d == best_dist && a < best_angle)) {
      best = &v;
      best_dist = d;
      best_angle = a;
    }
  }
  if (best != nullptr) return *best;

  double best_score = -std::numeric_limits<double>::infinity();
  for (const Vec2& v : candidates) {
    double t = cfg.time_cap;
    for (const NeighborInfo& n : neighbors) {
      t = std::min(t, candidate_collision_time(n, v, self_radius));
    }
    const double score = t - cfg.penalty_weight * norm(v - v_des);
    const double a = local_angle(v);
    if (score > best_score || (score == best_score && a < best_angle)) {
      best = &v;
      best_score = score;
      best_angle = a;
    }
  }
  return *best;
}

}  // namespace rvonav
