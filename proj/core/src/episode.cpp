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

#include "rvonav/episode.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <iomanip>
#include <istream>
#include <limits>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace rvonav {

namespace {

TrajectoryRow make_row(std::size_t step, const RobotState& r, double reward, DoneReason reason) {
  return {step,       r.id,     r.position.x, r.position.y, r.orientation, r.velocity.x,
          r.velocity.y, reward, reason,       r.goal.x,     r.goal.y};
}

DoneReason parse_reason(const std::string& s) {
  if (s == "running") return DoneReason::Running;
  if (s == "arrived") return DoneReason::Arrived;
  if (s == "collision") return DoneReason::Collision;
  if (s == "timeout") return DoneReason::Timeout;
  throw RecordFormatError("unknown done_reason '" + s + "'");
}

std::string fmt(double v) { return format_number(v); }

std::string fixed(double v, int digits) {
  if (std::isnan(v)) return "nan";
  std::ostringstream os;
  os << std::fixed << std::setprecision(digits) << v;
  return os.str();
}

void mean_std(const std::vector<double>& xs, double& mean, double& sd) {
  if (xs.empty()) {
    mean = sd = std::numeric_limits<double>::quiet_NaN();
    return;
  }
  double s = 0.0;
  for (double x : xs) s += x;
  mean = s / double(xs.size());
  double v = 0.0;
  for (double x : xs) v += (x - mean) * (x - mean);
  sd = std::sqrt(v / double(xs.size()));
}

}  // namespace

double EpisodeRecord::mean_speed(double dt) const {
  double total = 0.0;
  std::size_t counted = 0;
  for (std::size_t i = 0; i < path_length.size(); ++i) {
    if (active_steps[i] == 0) continue;
    total += path_length[i] / (double(active_steps[i]) * dt);
    ++counted;
  }
  return counted == 0 ? 0.0 : total / double(counted);
}

EpisodeRecord run_episode(World& world, Policy& policy, std::size_t max_steps) {
  EpisodeRecord rec;
  const std::size_t n = world.robots().size();
  rec.robot_count = n;
  rec.path_length.assign(n, 0.0);
  rec.active_steps.assign(n, 0);
  for (const RobotState& r : world.robots()) rec.rows.push_back(make_row(0, r, 0.0, DoneReason::Running));

  std::vector<Observation> obs = world.sense_all();
  while (!world.done() && world.step_count() < max_steps) {
    std::vector<Vec2> prev(n);
    std::size_t active = 0;
    for (std::size_t i = 0; i < n; ++i) {
      prev[i] = world.robots()[i].position;
      active += world.robots()[i].active() ? 1 : 0;
    }
    const auto t0 = std::chrono::steady_clock::now();
    const std::vector<Vec2> actions = policy.act(world, obs);
    rec.policy_seconds +=
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    rec.action_count += active;

    StepOutcome out = world.step(actions);
    for (std::size_t i = 0; i < n; ++i) {
      const RobotOutcome& o = out.robots[i];
      if (!o.was_active) continue;
      const RobotState& r = world.robots()[i];
      rec.path_length[i] += norm(r.position - prev[i]);
      ++rec.active_steps[i];
      rec.rows.push_back(make_row(world.step_count(), r, o.reward, o.reason));
      switch (o.reason) {
        case DoneReason::Arrived:
          ++rec.arrivals;
          rec.last_arrival_step = world.step_count();
          break;
        case DoneReason::Collision: ++rec.collisions; break;
        case DoneReason::Timeout: ++rec.timeouts; break;
        case DoneReason::Running: break;
      }
    }
    obs = std::move(out.observations);
  }
  rec.steps = world.step_count();
  if (!world.done()) {
    // Cut off by max_steps before the world's own limit.
    for (const RobotState& r : world.robots()) rec.timeouts += r.active() ? 1 : 0;
  }
  return rec;
}

EpisodeRecord record_from_rows(std::span<const TrajectoryRow> rows) {
  EpisodeRecord rec;
  std::size_t n = 0;
  for (const TrajectoryRow& r : rows) n = std::max(n, r.robot_id + 1);
  rec.robot_count = n;
  rec.path_length.assign(n, 0.0);
  rec.active_steps.assign(n, 0);
  rec.rows.assign(rows.begin(), rows.end());
  std::stable_sort(rec.rows.begin(), rec.rows.end(), [](const TrajectoryRow& a, const TrajectoryRow& b) {
    return a.step != b.step ? a.step < b.step : a.robot_id < b.robot_id;
  });

  std::vector<const TrajectoryRow*> prev(n, nullptr);
  std::vector<bool> finished(n, false);
  for (const TrajectoryRow& r : rec.rows) {
    rec.steps = std::max(rec.steps, r.step);
    if (prev[r.robot_id] != nullptr) {
      const TrajectoryRow& p = *prev[r.robot_id];
      rec.path_length[r.robot_id] += norm(Vec2{r.x, r.y} - Vec2{p.x, p.y});
      ++rec.active_steps[r.robot_id];
    }
    prev[r.robot_id] = &r;
    switch (r.reason) {
      case DoneReason::Arrived:
        ++rec.arrivals;
        rec.last_arrival_step = r.step;
        finished[r.robot_id] = true;
        break;
      case DoneReason::Collision:
        ++rec.collisions;
        finished[r.robot_id] = true;
        break;
      case DoneReason::Timeout:
        ++rec.timeouts;
        finished[r.robot_id] = true;
        break;
      case DoneReason::Running: break;
    }
  }
  // Robots still running when the record ends were cut off by the step limit.
  if (rec.collisions == 0) {
    for (std::size_t i = 0; i < n; ++i) rec.timeouts += finished[i] ? 0 : 1;
  }
  return rec;
}

std::vector<EpisodeRecord> evaluate(const ScenarioConfig& scenario, const WorldConfig& world_cfg,
                                    Policy& policy, std::size_t episodes,
                                    std::uint64_t base_seed) {
  std::vector<EpisodeRecord> out;
  out.reserve(episodes);
  for (std::size_t k = 0; k < episodes; ++k) {
    const std::uint64_t seed = mix_seed(base_seed, k);
    ScenarioConfig sc = scenario;
    sc.rng_seed = seed;
    World world(world_cfg, generate_scenario(sc));
    policy.reset(seed);
    out.push_back(run_episode(world, policy, world_cfg.max_steps));
  }
  return out;
}

EvalReport summarize(std::span<const EpisodeRecord> records, double dt) {
  EvalReport rep;
  rep.episode_count = records.size();
  std::vector<double> steps;
  std::vector<double> seconds;
  std::vector<double> speeds;
  double policy_seconds = 0.0;
  std::size_t actions = 0;
  std::size_t successes = 0;
  for (const EpisodeRecord& r : records) {
    if (!records.empty()) rep.robots = r.robot_count;
    policy_seconds += r.policy_seconds;
    actions += r.action_count;
    if (!r.success()) continue;
    ++successes;
    steps.push_back(double(r.last_arrival_step));
    seconds.push_back(double(r.last_arrival_step) * dt);
    speeds.push_back(r.mean_speed(dt));
  }
  rep.success_rate = records.empty() ? 0.0 : double(successes) / double(records.size());
  mean_std(steps, rep.travel_steps_mean, rep.travel_steps_std);
  mean_std(seconds, rep.travel_seconds_mean, rep.travel_seconds_std);
  mean_std(speeds, rep.speed_mean, rep.speed_std);
  rep.per_action_us = actions == 0 ? 0.0 : 1e6 * policy_seconds / double(actions);
  return rep;
}

void write_record_csv(std::ostream& out, const EpisodeRecord& record) {
  out << "step,robot_id,x,y,theta,vx,vy,reward,done_reason,goal_x,goal_y\n";
  for (const TrajectoryRow& r : record.rows) {
    out << r.step << ',' << r.robot_id << ',' << fmt(r.x) << ',' << fmt(r.y) << ','
        << fmt(r.theta) << ',' << fmt(r.vx) << ',' << fmt(r.vy) << ',' << fmt(r.reward) << ','
        << to_string(r.reason) << ',' << fmt(r.goal_x) << ',' << fmt(r.goal_y) << '\n';
  }
}

std::vector<TrajectoryRow> read_record_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw RecordFormatError("record CSV is empty");
  if (line.rfind("step,robot_id,x,y,theta,vx,vy,reward,done_reason", 0) != 0) {
    throw RecordFormatError("record CSV has an unexpected header");
  }
  std::vector<TrajectoryRow> rows;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    std::vector<std::string> f;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) f.push_back(cell);
    if (f.size() != 9 && f.size() != 11) {
      throw RecordFormatError("record CSV line " + std::to_string(line_no) +
                               ": expected 9 or 11 fields");
    }
    try {
      TrajectoryRow r;
      r.step = std::stoul(f[0]);
      r.robot_id = std::stoul(f[1]);
      r.x = std::stod(f[2]);
      r.y = std::stod(f[3]);
      r.theta = std::stod(f[4]);
      r.vx = std::stod(f[5]);
      r.vy = std::stod(f[6]);
      r.reward = std::stod(f[7]);
      r.reason = parse_reason(f[8]);
      if (f.size() == 11) {
        r.goal_x = std::stod(f[9]);
        r.goal_y = std::stod(f[10]);
      } else {
        r.goal_x = std::numeric_limits<double>::quiet_NaN();
        r.goal_y = std::numeric_limits<double>::quiet_NaN();
      }
      rows.push_back(r);
    } catch (const std::exception& e) {
      throw RecordFormatError("record CSV line " + std::to_string(line_no) + ": " + e.what());
    }
  }
  if (rows.empty()) throw RecordFormatError("record CSV has no rows");
  return rows;
}

void write_metrics_csv(std::ostream& out, std::span<const EvalReport> reports) {
  out << "scenario,policy,robots,episodes,success_rate,travel_steps_mean,travel_steps_std,"
         "travel_seconds_mean,travel_seconds_std,speed_mean,speed_std\n";
  for (const EvalReport& r : reports) {
    out << r.scenario << ',' << r.policy << ',' << r.robots << ',' << r.episode_count << ','
        << fmt(r.success_rate) << ',' << fmt(r.travel_steps_mean) << ','
        << fmt(r.travel_steps_std) << ',' << fmt(r.travel_seconds_mean) << ','
        << fmt(r.travel_seconds_std) << ',' << fmt(r.speed_mean) << ',' << fmt(r.speed_std)
        << '\n';
  }
}

void write_timing_csv(std::ostream& out, std::span<const EvalReport> reports) {
  out << "scenario,policy,robots,per_action_us\n";
  for (const EvalReport& r : reports) {
    out << r.scenario << ',' << r.policy << ',' << r.robots << ',' << fixed(r.per_action_us, 3)
        << '\n';
  }
}

void print_report_table(std::ostream& out, std::span<const EvalReport> reports) {
  out << std::left << std::setw(10) << "scenario" << std::setw(10) << "policy" << std::right
      << std::setw(7) << "robots" << std::setw(9) << "success" << std::setw(20)
      << "travel (steps)" << std::setw(20) << "speed (m/s)" << std::setw(14) << "cost (us)"
      << '\n';
  for (const EvalReport& r : reports) {
    out << std::left << std::setw(10) << r.scenario << std::setw(10) << r.policy << std::right
        << std::setw(7) << r.robots << std::setw(9) << fixed(r.success_rate, 2) << std::setw(20)
        << (fixed(r.travel_steps_mean, 2) + " +- " + fixed(r.travel_steps_std, 2))
        << std::setw(20) << (fixed(r.speed_mean, 3) + " +- " + fixed(r.speed_std, 3))
        << std::setw(14) << fixed(r.per_action_us, 1) << '\n';
  }
}

// Shortest round-trip representation keeps CSV output reproducible.
std::string format_number(double v) {
  if (std::isnan(v)) return "nan";
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  double back = 0.0;
  for (int prec = 6; prec <= 17; ++prec) {
    std::snprintf(buf, sizeof(buf), "%.*g", prec, v);
    std::sscanf(buf, "%lf", &back);
    if (back == v) break;
  }
  return buf;
}

}  // namespace rvonav
