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

#include "rvonav/policy.hpp"

#include <utility>

namespace rvonav {

std::uint64_t mix_seed(std::uint64_t base, std::uint64_t index) {
  std::uint64_t z = base + 0x9e3779b97f4a7c15ULL * (index + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

std::vector<Vec2> ZeroPolicy::act(const World& world, const std::vector<Observation>&) {
  return std::vector<Vec2>(world.robots().size());
}

BaselinePolicy::BaselinePolicy(SamplerConfig cfg) : cfg_(cfg) { cfg_.validate(); }

void BaselinePolicy::reset(std::uint64_t episode_seed) {
  episode_seed_ = episode_seed;
  rngs_.clear();
}

std::vector<Vec2> BaselinePolicy::act(const World& world, const std::vector<Observation>& obs) {
  const auto& robots = world.robots();
  while (rngs_.size() < robots.size()) {
    rngs_.emplace_back(mix_seed(cfg_.seed ^ episode_seed_, rngs_.size()));
  }
  const double mu = world.config().kinematics.mu;
  std::vector<Vec2> actions(robots.size());
  for (std::size_t i = 0; i < robots.size(); ++i) {
    const RobotState& r = robots[i];
    if (!r.active()) continue;
    const Observation& o = obs[i];
    const Vec2 v = select_velocity(o.neighbors, o.desired_velocity(), r.command,
                                   r.collision_radius, cfg_, rngs_[i]);
    actions[i] = (v - r.command) / mu;
  }
  return actions;
}

NetworkPolicy::NetworkPolicy(nn::Network network, bool deterministic)
    : network_(std::move(network)), deterministic_(deterministic) {}

void NetworkPolicy::reset(std::uint64_t episode_seed) { rng_.seed(episode_seed); }

std::vector<Vec2> NetworkPolicy::act(const World& world, const std::vector<Observation>& obs) {
  const auto& robots = world.robots();
  std::vector<Vec2> actions(robots.size());
  std::vector<Observation> batch_obs;
  std::vector<std::size_t> ids;
  for (std::size_t i = 0; i < robots.size(); ++i) {
    if (!robots[i].active()) continue;
    batch_obs.push_back(obs[i]);
    ids.push_back(i);
  }
  if (ids.empty()) return actions;

  nn::NoGradGuard guard;
  const nn::ObservationBatch batch = nn::make_batch(batch_obs, network_.config());
  const nn::Tensor mean = network_.actor_mean(network_.features(batch));
  const nn::Tensor log_std = network_.log_std();
  for (std::size_t k = 0; k < ids.size(); ++k) {
    nn::ActionDistribution d;
    for (std::size_t j = 0; j < nn::kActionSize; ++j) {
      d.mean[j] = mean.value()(Eigen::Index(k), Eigen::Index(j));
      d.log_std[j] = log_std.value()(0, Eigen::Index(j));
    }
    actions[ids[k]] = sample_action(d, rng_, deterministic_).action;
  }
  return actions;
}

}  // namespace rvonav
