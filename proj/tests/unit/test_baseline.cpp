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

#include <gtest/gtest.h>

#include <cmath>
#include <limits>
#include <numbers>
#include <random>
#include <vector>

#include "rvonav/baseline.hpp"
#include "rvonav/geometry.hpp"
#include "rvonav/world.hpp"

namespace rvonav {
namespace {

RobotState robot(std::size_t id, Vec2 pos, Vec2 vel, Vec2 goal) {
  RobotState r;
  r.id = id;
  r.position = pos;
  r.velocity = vel;
  r.command = vel;
  r.orientation = heading(vel);
  r.goal = goal;
  return r;
}

bool is_safe(const std::vector<NeighborInfo>& nb, const Vec2& v) {
  for (const NeighborInfo& n : nb) {
    if (contains(n.cone, v)) return false;
  }
  return true;
}

// Crowded random observations sensed from a real world.
std::vector<Observation> random_scenes(std::size_t count, std::uint64_t seed) {
  std::vector<Observation> out;
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (std::size_t s = 0; s < count; ++s) {
    Scenario sc;
    sc.robots.push_back(robot(0, {0, 0}, {u(rng), u(rng)}, {4, 0}));
    for (std::size_t i = 1; i < 5; ++i) {
      Vec2 p;
      do {
        p = {2.5 * u(rng), 2.5 * u(rng)};
      } while (norm(p) < 0.8);
      sc.robots.push_back(robot(i, p, {u(rng), u(rng)}, p));
    }
    World w(WorldConfig{}, sc);
    out.push_back(w.sense(0));
  }
  return out;
}

TEST(SelectVelocity, NoConesReturnsDesired) {
  std::mt19937_64 rng(1);
  const Vec2 v_des{0.7, -0.4};
  EXPECT_EQ(select_velocity({}, v_des, {0.1, 0.1}, 0.3, SamplerConfig{}, rng), v_des);
}

TEST(SelectVelocity, ConeAwayFromDesiredReturnsDesired) {
  Scenario sc;
  sc.robots.push_back(robot(0, {0, 0}, {1, 0}, {5, 0}));
  sc.robots.push_back(robot(1, {0, 2}, {0, 0}, {0, 2}));
  World w(WorldConfig{}, sc);
  const Observation o = w.sense(0);
  ASSERT_EQ(o.neighbors.size(), 1u);
  const Vec2 v_des{1.5, 0.0};
  ASSERT_FALSE(contains(o.neighbors[0].cone, v_des));
  std::mt19937_64 rng(2);
  EXPECT_EQ(select_velocity(o.neighbors, v_des, {1, 0}, 0.3, SamplerConfig{}, rng), v_des);
}

TEST(SelectVelocity, HeadOnPairPicksMirroredVelocities) {
  Scenario sc;
  sc.robots.push_back(robot(0, {-1.5, 0}, {1, 0}, {3, 0}));
  sc.robots.push_back(robot(1, {1.5, 0}, {-1, 0}, {-3, 0}));
  World w(WorldConfig{}, sc);
  const Observation a = w.sense(0), b = w.sense(1);
  const Vec2 da{1.5, 0.0}, db{-1.5, 0.0};
  ASSERT_TRUE(contains(a.neighbors[0].cone, da));
  std::mt19937_64 ra(3), rb(3);
  const Vec2 va = select_velocity(a.neighbors, da, {1, 0}, 0.3, SamplerConfig{}, ra);
  const Vec2 vb = select_velocity(b.neighbors, db, {-1, 0}, 0.3, SamplerConfig{}, rb);
  EXPECT_NE(va, da);
  EXPECT_NEAR(va.x, -vb.x, 1e-9);
  EXPECT_NEAR(va.y, -vb.y, 1e-9);
  // Same side relative to each robot's own heading.
  EXPECT_GT(cross(da, va) * cross(db, vb), 0.0);
}

TEST(SelectVelocity, SafeWheneverASafeCandidateExists) {
  SamplerConfig cfg;
  std::size_t checked = 0;
  for (const Observation& o : random_scenes(300, 4)) {
    const Vec2 v_des = o.desired_velocity();
    std::mt19937_64 rng(5), probe(5);
    const Vec2 v = select_velocity(o.neighbors, v_des, o.velocity(), 0.3, cfg, rng);
    // Regenerate the candidate set to know whether any was safe.
    bool any = is_safe(o.neighbors, v_des) || is_safe(o.neighbors, o.velocity()) ||
               is_safe(o.neighbors, {});
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    const Vec2 axis = norm(v_des) > 0 ? normalized(v_des) : Vec2{1, 0};
    for (std::size_t i = 0; i < cfg.sample_count && !any; ++i) {
      const double r = cfg.candidate_radius * std::sqrt(unit(probe));
      const double th = 2.0 * std::numbers::pi * unit(probe);
      any = is_safe(o.neighbors, rotated(Vec2{r * std::cos(th), r * std::sin(th)}, heading(axis)));
    }
    if (any) {
      EXPECT_TRUE(is_safe(o.neighbors, v));
      ++checked;
    }
  }
  EXPECT_GT(checked, 100u);
}

TEST(SelectVelocity, WithinSamplingResolutionOfDenseOptimum) {
  SamplerConfig cfg;
  SamplerConfig dense = cfg;
  dense.sample_count = 10 * cfg.sample_count;
  const double resolution = 2.0 * cfg.candidate_radius / std::sqrt(double(cfg.sample_count));
  std::size_t within = 0, total = 0;
  for (const Observation& o : random_scenes(200, 6)) {
    const Vec2 v_des = o.desired_velocity();
    std::mt19937_64 r1(7), r2(8);
    const Vec2 v = select_velocity(o.neighbors, v_des, o.velocity(), 0.3, cfg, r1);
    const Vec2 ref = select_velocity(o.neighbors, v_des, o.velocity(), 0.3, dense, r2);
    if (!is_safe(o.neighbors, v) || !is_safe(o.neighbors, ref)) continue;
    ++total;
    if (norm(v - v_des) - norm(ref - v_des) <= resolution) ++within;
  }
  ASSERT_GT(total, 50u);
  EXPECT_GE(double(within) / double(total), 0.95);
}

TEST(SelectVelocity, DeterministicUnderSeed) {
  for (const Observation& o : random_scenes(20, 9)) {
    std::mt19937_64 a(10), b(10);
    EXPECT_EQ(select_velocity(o.neighbors, o.desired_velocity(), o.velocity(), 0.3, {}, a),
              select_velocity(o.neighbors, o.desired_velocity(), o.velocity(), 0.3, {}, b));
  }
}

TEST(SelectVelocity, FallbackMaximisesTimeMinusDeviation) {
  // Surrounded on all sides: no candidate is outside every cone.
  Scenario sc;
  sc.robots.push_back(robot(0, {0, 0}, {0, 0}, {5, 0}));
  for (std::size_t i = 0; i < 8; ++i) {
    const Vec2 p = rotated(Vec2{0.62, 0.0}, double(i) * std::numbers::pi / 4.0);
    sc.robots.push_back(robot(i + 1, p, {0, 0}, p));
  }
  WorldConfig wc;
  wc.sensing.max_neighbors = 8;
  World w(wc, sc);
  const Observation o = w.sense(0);
  SamplerConfig cfg;
  std::mt19937_64 rng(11);
  const Vec2 v_des{1.5, 0.0};
  const Vec2 v = select_velocity(o.neighbors, v_des, {}, 0.3, cfg, rng);
  EXPECT_FALSE(is_safe(o.neighbors, v));
  EXPECT_TRUE(std::isfinite(v.x) && std::isfinite(v.y));
  EXPECT_LE(norm(v), cfg.candidate_radius + 1e-9);
}

TEST(SamplerConfig, RejectsTooFewSamples) {
  SamplerConfig cfg;
  cfg.sample_count = 10;
  EXPECT_THROW(cfg.validate(), std::invalid_argument);
}

}  // namespace
}  // namespace rvonav
