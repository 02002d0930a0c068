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

#ifndef RVONAV_TOOLS_SVG_HPP_
#define RVONAV_TOOLS_SVG_HPP_

#include <ostream>
#include <span>
#include <vector>

#include "rvonav/episode.hpp"
#include "rvonav/geometry.hpp"

namespace rvonav::cli {

struct PlotOptions {
  double robot_radius = 0.2;
  double pixels_per_meter = 60.0;
  double margin = 1.0;  ///< m
};

/// Trajectories, start and goal markers, final footprints and a metre grid.
void write_trajectory_svg(std::ostream& out, std::span<const TrajectoryRow> rows,
                          std::span<const Segment> segments, const PlotOptions& opt);

}  // namespace rvonav::cli

#endif  // RVONAV_TOOLS_SVG_HPP_
