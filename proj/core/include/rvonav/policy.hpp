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

#ifndef RVONAV_POLICY_HPP_
#define RVONAV_POLICY_HPP_

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "rvonav/baseline.hpp"
#include "rvonav/network.hpp"
#include "rvonav/world.hpp"

namespace rvonav {

/// Maps observations to velocity increments for every robot in a world.
class Policy {
 public:
  virtual ~Policy() = default;
  virtual std::string name() const = 0;
  /// Called at the start of each episode.
  virtual void reset(std::uint64_t /*episode_seed*/) {}
  /// Increments indexed by robot id; entries for inactive robots are ignored.
  virtual std::vector<Vec2> act(const World& world, const std::vector<Observation>& obs) = 0;
};

/// Never changes the commanded velocity.
class ZeroPolicy : public Policy {
 public:
  std::string name() const override { return "zero"; }
  std::vector<Vec2> act(const World& world, const std::vector<Observation>& obs) override;
};

/// Sampling-based reactive baseline; one RNG stream per robot.
class BaselinePolicy : public Policy {
 public:
  explicit BaselinePolicy(SamplerConfig cfg);
  std::string name() const override { return "baseline"; }
  void reset(std::uint64_t episode_seed) override;
  std::vector<Vec2> act(const World& world, const std::vector<Observation>& obs) override;

 private:
  SamplerConfig cfg_;
  std::uint64_t episode_seed_ = 0;
  std::vector<std::mt19937_64> rngs_;
};

/// Learned policy; one batched forward pass per step.
class NetworkPolicy : public Policy {
 public:
  explicit NetworkPolicy(nn::Network network, bool deterministic = true);
  std::string name() const override { return "rlrvo"; }
  void reset(std::uint64_t episode_seed) override;
  std::vector<Vec2> act(const World& world, const std::vector<Observation>& obs) override;
  const nn::Network& network() const { return network_; }

 private:
  nn::Network network_;
  bool deterministic_;
  std::mt19937_64 rng_;
};

/// SplitMix64 step; used to derive independent seeds from (base, index).
std::uint64_t mix_seed(std::uint64_t base, std::uint64_t index);

}  // namespace rvonav

#endif  // RVONAV_POLICY_HPP_
