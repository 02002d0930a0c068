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

#ifndef RVONAV_EPISODE_HPP_
#define RVONAV_EPISODE_HPP_

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "rvonav/policy.hpp"
#include "rvonav/world.hpp"

namespace rvonav {

struct TrajectoryRow {
  std::size_t step = 0;
  std::size_t robot_id = 0;
  double x = 0.0;
  double y = 0.0;
  double theta = 0.0;
  double vx = 0.0;
  double vy = 0.0;
  double reward = 0.0;
  DoneReason reason = DoneReason::Running;
  double goal_x = 0.0;
  double goal_y = 0.0;

  bool operator==(const TrajectoryRow&) const = default;
};

struct EpisodeRecord {
  std::size_t robot_count = 0;
  std::vector<TrajectoryRow> rows;  ///< Step 0 holds the initial states.
  std::size_t steps = 0;            ///< Steps simulated.
  std::size_t last_arrival_step = 0;
  std::size_t arrivals = 0;
  std::size_t collisions = 0;
  std::size_t timeouts = 0;
  std::vector<double> path_length;  ///< Per robot (m).
  std::vector<std::size_t> active_steps;
  // Wall-clock policy cost; not part of the deterministic record.
  double policy_seconds = 0.0;
  std::size_t action_count = 0;

  /// Every robot arrived; no collision and no timeout.
  bool success() const { return arrivals == robot_count && collisions == 0 && timeouts == 0; }
  /// Mean over robots of path length / active time.
  double mean_speed(double dt) const;
};

/// Steps until the world reports done or `max_steps` is hit.
EpisodeRecord run_episode(World& world, Policy& policy, std::size_t max_steps);

/// Runs `episodes` seeded episodes; episode k uses mix_seed(base_seed, k).
/// Recomputes the counters and path lengths of a record from its rows.
EpisodeRecord record_from_rows(std::span<const TrajectoryRow> rows);

std::vector<EpisodeRecord> evaluate(const ScenarioConfig& scenario, const WorldConfig& world_cfg,
                                    Policy& policy, std::size_t episodes,
                                    std::uint64_t base_seed);

struct EvalReport {
  std::string scenario;
  std::string policy;
  std::size_t robots = 0;
  std::size_t episode_count = 0;
  double success_rate = 0.0;
  // Travel time and speed are averaged over successful episodes.
  double travel_steps_mean = 0.0;
  double travel_steps_std = 0.0;
  double travel_seconds_mean = 0.0;
  double travel_seconds_std = 0.0;
  double speed_mean = 0.0;
  double speed_std = 0.0;
  double per_action_us = 0.0;
};

EvalReport summarize(std::span<const EpisodeRecord> records, double dt);

/// CSV columns: step,robot_id,x,y,theta,vx,vy,reward,done_reason,goal_x,goal_y
class RecordFormatError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

void write_record_csv(std::ostream& out, const EpisodeRecord& record);
/// Throws std::runtime_error on malformed input.
std::vector<TrajectoryRow> read_record_csv(std::istream& in);

/// Metrics CSV without timing columns, so it is reproducible byte for byte.
void write_metrics_csv(std::ostream& out, std::span<const EvalReport> reports);
void write_timing_csv(std::ostream& out, std::span<const EvalReport> reports);
void print_report_table(std::ostream& out, std::span<const EvalReport> reports);

/// Shortest decimal text that parses back to the same double.
std::string format_number(double v);

}  // namespace rvonav

#endif  // RVONAV_EPISODE_HPP_
