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

#include "rvonav/observation.hpp"

#include <algorithm>

namespace rvonav {

std::array<double, kConeBlockSize> NeighborInfo::cone_block() const {
  return {cone.apex.x,      cone.apex.y,       cone.left_dir.x, cone.left_dir.y,
          cone.right_dir.x, cone.right_dir.y,  distance,        risk};
}

std::array<double, kRawBlockSize> NeighborInfo::raw_block() const {
  return {rel_pos.x, rel_pos.y, rel_vel.x, rel_vel.y, other_radius};
}

bool neighbor_order(const NeighborInfo& lhs, const NeighborInfo& rhs) {
  if (lhs.risk != rhs.risk) return lhs.risk < rhs.risk;
  return lhs.distance > rhs.distance;
}

bool ordering_holds(const Observation& obs) {
  return std::is_sorted(obs.neighbors.begin(), obs.neighbors.end(), neighbor_order);
}

}  // namespace rvonav
