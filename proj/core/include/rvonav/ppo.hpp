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

#ifndef RVONAV_PPO_HPP_
#define RVONAV_PPO_HPP_

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <memory>
#include <ostream>
#include <random>
#include <span>
#include <stdexcept>
#include <vector>

#include "rvonav/config.hpp"
#include "rvonav/network.hpp"
#include "rvonav/observation.hpp"
#include "rvonav/world.hpp"

namespace rvonav {

class NonFiniteLoss : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct Transition {
  Observation obs;
  Vec2 action;
  double reward = 0.0;
  double value = 0.0;
  double logp_old = 0.0;
  bool done = false;
};

struct RolloutBuffer {
  std::vector<Transition> steps;
  double bootstrap_value = 0.0;  ///< V of the state after the last step; unused if it is terminal.
  std::vector<double> advantages;
  std::vector<double> returns;

  std::size_t size() const { return steps.size(); }
};

struct GaeResult {
  std::vector<double> advantages;
  std::vector<double> returns;
};

/**
 * delta_t = r_t + gamma V_{t+1} (1 - done_t) - V_t
 * A_t     = delta_t + gamma lambda (1 - done_t) A_{t+1}
 * The value after the last step is @p bootstrap_value.
 */
GaeResult compute_gae(std::span<const double> rewards, std::span<const double> values,
                      const std::vector<bool>& dones, double bootstrap_value, double gamma,
                      double lambda);

/// Fills buffer.advantages and buffer.returns.
void compute_gae(RolloutBuffer& buffer, double gamma, double lambda);

/// Shifts and scales to zero mean and unit (population) std; a constant input becomes zeros.
void normalize_advantages(std::vector<double>& advantages);

/**
 * @brief Runs a shared policy snapshot in a persistent multi-robot world.
 *
 * Each robot id owns one buffer. Episodes restart when they end and
 * collection continues until every buffer holds @p steps transitions;
 * robots whose buffer is already full keep acting without recording.
 */
class RolloutCollector {
 public:
  RolloutCollector(ScenarioConfig scenario, WorldConfig world, std::uint64_t seed);

  std::vector<RolloutBuffer> collect(const nn::Network& snapshot, std::size_t steps);

  std::size_t episodes_started() const { return episodes_; }
  std::size_t episodes_finished() const { return finished_; }
  std::size_t episodes_succeeded() const { return succeeded_; }

 private:
  void reset_world();

  ScenarioConfig scenario_;
  WorldConfig world_cfg_;
  std::uint64_t seed_;
  std::mt19937_64 rng_;
  std::unique_ptr<World> world_;
  std::vector<Observation> obs_;
  std::size_t episodes_ = 0;
  std::size_t finished_ = 0;
  std::size_t succeeded_ = 0;
};

struct UpdateReport {
  double policy_loss = 0.0;  ///< Negated surrogate at the last policy step taken.
  double value_loss = 0.0;   ///< Mean over buffers of the final value MSE.
  double kl = 0.0;           ///< Largest approximate KL seen.
  std::size_t policy_steps = 0;
  std::size_t value_steps = 0;
  std::size_t early_stops = 0;  ///< Buffers whose policy loop hit the KL limit.
  std::vector<double> kl_trace;  ///< KL measured before each attempted policy step.
};

/**
 * @brief Clipped-surrogate actor update and value regression.
 *
 * Buffers are processed in order. For each, up to policy_iters actor steps
 * run, stopping as soon as mean(logp_old - logp_new) exceeds kl_limit
 * (measured before the step); then value_iters critic steps follow.
 * logp_old stays the rollout snapshot's log-probability throughout.
 */
class PpoTrainer {
 public:
  PpoTrainer(nn::Network& network, const TrainConfig& cfg);

  /// Buffers must already carry advantages and returns. Throws NonFiniteLoss.
  UpdateReport update(std::span<const RolloutBuffer> buffers);

 private:
  nn::Network& net_;
  TrainConfig cfg_;
  nn::Adam actor_opt_;
  nn::Adam critic_opt_;
};

struct CurveRow {
  std::size_t epoch = 0;
  std::size_t stage = 0;
  double mean_reward = 0.0;
  double success_rate = 0.0;
  double mean_steps = 0.0;
  double kl = 0.0;
  double policy_loss = 0.0;
  double value_loss = 0.0;
  double wall_time_s = 0.0;
};

void write_curve_header(std::ostream& out);
void write_curve_row(std::ostream& out, const CurveRow& row);

struct TrainResult {
  nn::Network network;
  std::vector<CurveRow> curve;
  bool early_stopped = false;
  std::filesystem::path final_checkpoint;
};

/**
 * Two-stage training. Writes curve.csv, checkpoints/epoch_NNNN.ckpt every
 * checkpoint_every epochs and final.ckpt into @p out_dir. Progress lines go
 * to @p log when given.
 */
TrainResult train(const ExperimentConfig& cfg, const std::filesystem::path& out_dir,
                  std::ostream* log = nullptr);

}  // namespace rvonav

#endif  // RVONAV_PPO_HPP_
