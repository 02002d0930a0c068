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

#ifndef RVONAV_BASELINE_HPP_
#define RVONAV_BASELINE_HPP_

#include <cstddef>
#include <cstdint>
#include <random>
#include <span>

#include "rvonav/observation.hpp"

namespace rvonav {

struct SamplerConfig {
  std::size_t sample_count = 250;
  double candidate_radius = 1.5;  ///< Radius of the sampling disc (m/s), normally v_max.
  double penalty_weight = 1.0;    ///< Trade-off used when every candidate is unsafe.
  double time_cap = 10.0;         ///< Collision times are capped at this value when scoring (s).
  std::uint64_t seed = 0;

  void validate() const;
};

/// Earliest contact time of the sensing robot moving at `v` against one entity.
double candidate_collision_time(const NeighborInfo& n, const Vec2& v, double self_radius);

/**
 * Reactive velocity selection over the complement of the joint cone area.
 *
 * Candidates are v_des, v_current, zero and `sample_count` uniform draws in
 * a disc, drawn in a frame aligned with v_des. The safe candidate closest
 * to v_des wins, ties broken by the candidate's angle in that frame. When
 * nothing is safe, the candidate maximising
 * min(collision time, cap) - penalty * |v - v_des| is returned.
 */
Vec2 select_velocity(std::span<const NeighborInfo> neighbors, const Vec2& v_des,
                     const Vec2& v_current, double self_radius, const SamplerConfig& cfg,
                     std::mt19937_64& rng);

}  // namespace rvonav

#endif  // RVONAV_BASELINE_HPP_
