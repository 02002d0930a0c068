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

#include <benchmark/benchmark.h>

#include <random>
#include <vector>

#include "rvonav/baseline.hpp"
#include "rvonav/geometry.hpp"
#include "rvonav/network.hpp"
#include "rvonav/policy.hpp"
#include "rvonav/world.hpp"

namespace {

using namespace rvonav;

Observation five_neighbors() {
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  Observation o;
  for (double& s : o.self_block) s = u(rng);
  for (int k = 0; k < 5; ++k) {
    NeighborInfo n;
    n.cone.apex = {u(rng), u(rng)};
    n.cone.left_dir = normalized(Vec2{u(rng), u(rng)});
    n.cone.right_dir = normalized(Vec2{u(rng), u(rng)});
    n.distance = 2.0;
    n.risk = 0.3;
    n.rel_pos = {u(rng), u(rng)};
    n.rel_vel = {u(rng), u(rng)};
    n.other_radius = 0.2;
    o.neighbors.push_back(n);
  }
  return o;
}

void BM_PolicyAction(benchmark::State& state) {
  nn::NetworkConfig cfg;
  cfg.hidden = std::size_t(state.range(0));
  cfg.fc = std::size_t(state.range(0));
  const nn::Network net(cfg);
  const Observation o = five_neighbors();
  for (auto _ : state) benchmark::DoNotOptimize(net.distribution(o));
}
BENCHMARK(BM_PolicyAction)->Arg(64)->Arg(256)->Unit(benchmark::kMicrosecond);

void BM_BaselineAction(benchmark::State& state) {
  const Observation o = five_neighbors();
  SamplerConfig cfg;
  cfg.sample_count = std::size_t(state.range(0));
  std::mt19937_64 rng(2);
  for (auto _ : state) {
    benchmark::DoNotOptimize(select_velocity(o.neighbors, {1.5, 0}, {1, 0}, 0.3, cfg, rng));
  }
}
BENCHMARK(BM_BaselineAction)->Arg(250)->Arg(1000)->Unit(benchmark::kMicrosecond);

void BM_VoDisc(benchmark::State& state) {
  const Disc a{{0, 0}, 0.3}, b{{2.0, 0.7}, 0.3};
  for (auto _ : state) benchmark::DoNotOptimize(rvo_disc(a, {1, 0}, b, {-0.5, 0.2}));
}
BENCHMARK(BM_VoDisc);

void BM_CollisionTime(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(collision_time({2.0, 0.3}, {1.0, 0.1}, 0.6));
}
BENCHMARK(BM_CollisionTime);

void BM_WorldStep(benchmark::State& state) {
  ScenarioConfig sc;
  sc.robot_count = std::size_t(state.range(0));
  sc.kind = ScenarioKind::Random;
  WorldConfig wc;
  wc.max_steps = 1u << 30;
  World w(wc, generate_scenario(sc));
  const std::vector<Vec2> zero(sc.robot_count);
  for (auto _ : state) benchmark::DoNotOptimize(w.step(zero));
}
BENCHMARK(BM_WorldStep)->Arg(4)->Arg(10)->Unit(benchmark::kMicrosecond);

}  // namespace

BENCHMARK_MAIN();
