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

#include "rvonav/ppo.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <numeric>

#include "rvonav/checkpoint.hpp"
#include "rvonav/episode.hpp"
#include "rvonav/policy.hpp"

namespace rvonav {

GaeResult compute_gae(std::span<const double> rewards, std::span<const double> values,
                      const std::vector<bool>& dones, double bootstrap_value, double gamma,
                      double lambda) {
  const std::size_t n = rewards.size();
  if (values.size() != n || dones.size() != n) {
    throw std::invalid_argument("compute_gae: rewards, values and dones differ in length");
  }
  GaeResult out;
  out.advantages.assign(n, 0.0);
  out.returns.assign(n, 0.0);
  double next_adv = 0.0;
  for (std::size_t k = n; k-- > 0;) {
    const double next_value = k + 1 < n ? values[k + 1] : bootstrap_value;
    const double live = dones[k] ? 0.0 : 1.0;
    const double delta = rewards[k] + gamma * next_value * live - values[k];
    next_adv = delta + gamma * lambda * live * next_adv;
    out.advantages[k] = next_adv;
    out.returns[k] = next_adv + values[k];
  }
  return out;
}

void compute_gae(RolloutBuffer& buffer, double gamma, double lambda) {
  std::vector<double> rewards, values;
  std::vector<bool> dones;
  for (const Transition& t : buffer.steps) {
    rewards.push_back(t.reward);
    values.push_back(t.value);
    dones.push_back(t.done);
  }
  GaeResult g = compute_gae(rewards, values, dones, buffer.bootstrap_value, gamma, lambda);
  buffer.advantages = std::move(g.advantages);
  buffer.returns = std::move(g.returns);
}

void normalize_advantages(std::vector<double>& adv) {
  if (adv.empty()) return;
  const double n = double(adv.size());
  const double mean = std::accumulate(adv.begin(), adv.end(), 0.0) / n;
  double var = 0.0;
  for (double a : adv) var += (a - mean) * (a - mean);
  const double sd = std::sqrt(var / n);
  for (double& a : adv) a = sd > 0.0 ? (a - mean) / sd : 0.0;
}

// Rollouts

RolloutCollector::RolloutCollector(ScenarioConfig scenario, WorldConfig world, std::uint64_t seed)
    : scenario_(std::move(scenario)), world_cfg_(std::move(world)), seed_(seed),
      rng_(mix_seed(seed, 0x5eed)) {
  reset_world();
}

void RolloutCollector::reset_world() {
  ScenarioConfig sc = scenario_;
  sc.rng_seed = mix_seed(seed_, episodes_++);
  world_ = std::make_unique<World>(world_cfg_, generate_scenario(sc));
  obs_ = world_->sense_all();
}

std::vector<RolloutBuffer> RolloutCollector::collect(const nn::Network& snapshot,
                                                     std::size_t steps) {
  nn::NoGradGuard guard;
  const std::size_t n = world_->robots().size();
  std::vector<RolloutBuffer> buffers(n);
  for (auto& b : buffers) b.steps.reserve(steps);
  auto all_full = [&] {
    return std::all_of(buffers.begin(), buffers.end(),
                       [&](const RolloutBuffer& b) { return b.steps.size() >= steps; });
  };

  std::vector<std::size_t> pending_ids;
  std::vector<Observation> pending_obs;

  while (!all_full()) {
    if (world_->done()) reset_world();
    const auto& robots = world_->robots();
    std::vector<std::size_t> ids;
    std::vector<Observation> batch_obs;
    for (std::size_t i = 0; i < n; ++i) {
      if (!robots[i].active()) continue;
      ids.push_back(i);
      batch_obs.push_back(obs_[i]);
    }
    const nn::ObservationBatch batch = nn::make_batch(batch_obs, snapshot.config());
    const nn::Tensor feats = snapshot.features(batch);
    const nn::Matrix mean = snapshot.actor_mean(feats).value();
    const nn::Matrix values = snapshot.critic_value(feats).value();
    const nn::Matrix log_std = snapshot.log_std().value();

    std::vector<Vec2> actions(n);
    std::vector<nn::SampledAction> sampled(ids.size());
    for (std::size_t k = 0; k < ids.size(); ++k) {
      nn::ActionDistribution d;
      for (std::size_t j = 0; j < nn::kActionSize; ++j) {
        d.mean[j] = mean(Eigen::Index(k), Eigen::Index(j));
        d.log_std[j] = log_std(0, Eigen::Index(j));
      }
      sampled[k] = nn::sample_action(d, rng_, false);
      actions[ids[k]] = sampled[k].action;
    }

    StepOutcome out = world_->step(actions);
    for (std::size_t k = 0; k < ids.size(); ++k) {
      const std::size_t i = ids[k];
      RolloutBuffer& buf = buffers[i];
      if (buf.steps.size() >= steps) continue;
      Transition t;
      t.obs = std::move(obs_[i]);
      t.action = sampled[k].action;
      t.reward = out.robots[i].reward;
      t.value = values(Eigen::Index(k), 0);
      t.logp_old = sampled[k].logp;
      t.done = out.robots[i].done || out.episode_done;
      buf.steps.push_back(std::move(t));
      if (buf.steps.size() == steps && !buf.steps.back().done) {
        pending_ids.push_back(i);
        pending_obs.push_back(out.observations[i]);
      }
    }
    obs_ = std::move(out.observations);
    if (out.episode_done) {
      ++finished_;
      const auto& rs = world_->robots();
      if (std::all_of(rs.begin(), rs.end(), [](const RobotState& r) { return r.arrived; })) {
        ++succeeded_;
      }
    }
  }

  if (!pending_ids.empty()) {
    const nn::ObservationBatch batch = nn::make_batch(pending_obs, snapshot.config());
    const nn::Matrix v = snapshot.critic_value(snapshot.features(batch)).value();
    for (std::size_t k = 0; k < pending_ids.size(); ++k) {
      buffers[pending_ids[k]].bootstrap_value = v(Eigen::Index(k), 0);
    }
  }
  return buffers;
}

// Updates

PpoTrainer::PpoTrainer(nn::Network& network, const TrainConfig& cfg)
    : net_(network), cfg_(cfg),
      actor_opt_(network.actor_parameters(),
                 {cfg.lr_actor, cfg.adam_beta1, cfg.adam_beta2, cfg.adam_eps}),
      critic_opt_(network.critic_parameters(),
                  {cfg.lr_critic, cfg.adam_beta1, cfg.adam_beta2, cfg.adam_eps}) {}

UpdateReport PpoTrainer::update(std::span<const RolloutBuffer> buffers) {
  UpdateReport rep;
  double value_loss_sum = 0.0;
  std::size_t value_buffers = 0;

  for (const RolloutBuffer& buf : buffers) {
    const std::size_t b = buf.steps.size();
    if (b == 0) continue;
    if (buf.advantages.size() != b || buf.returns.size() != b) {
      throw std::invalid_argument("ppo update: buffer lacks advantages or returns");
    }
    std::vector<Observation> obs;
    obs.reserve(b);
    nn::Matrix actions(Eigen::Index(b), 2);
    nn::Matrix logp_old(Eigen::Index(b), 1);
    nn::Matrix returns(Eigen::Index(b), 1);
    nn::Matrix adv(Eigen::Index(b), 1);
    std::vector<double> a = buf.advantages;
    if (cfg_.normalize_advantages) normalize_advantages(a);
    for (std::size_t k = 0; k < b; ++k) {
      const Transition& t = buf.steps[k];
      obs.push_back(t.obs);
      const auto r = Eigen::Index(k);
      actions(r, 0) = t.action.x;
      actions(r, 1) = t.action.y;
      logp_old(r, 0) = t.logp_old;
      returns(r, 0) = buf.returns[k];
      adv(r, 0) = a[k];
    }
    const nn::ObservationBatch batch = nn::make_batch(obs, net_.config());

    for (std::size_t k = 0; k < cfg_.policy_iters; ++k) {
      actor_opt_.zero_grad();
      const nn::Tensor mean = net_.actor_mean(net_.features(batch));
      const nn::Tensor logp = nn::gaussian_log_prob(mean, net_.log_std(), actions);
      const double kl = (logp_old - logp.value()).mean();
      rep.kl_trace.push_back(kl);
      rep.kl = std::max(rep.kl, kl);
      if (!std::isfinite(kl)) throw NonFiniteLoss("ppo update: non-finite KL estimate");
      if (kl > cfg_.kl_limit) {
        ++rep.early_stops;
        break;
      }
      const nn::Tensor loss = nn::neg(nn::clipped_surrogate(logp, logp_old, adv, cfg_.clip_eps));
      if (!std::isfinite(loss.item())) throw NonFiniteLoss("ppo update: non-finite policy loss");
      loss.backward();
      actor_opt_.step();
      net_.clamp_log_std();
      rep.policy_loss = loss.item();
      ++rep.policy_steps;
    }

    nn::Tensor feats;
    {
      nn::NoGradGuard guard;
      feats = net_.features(batch).detach();
    }
    const nn::Tensor target(returns);
    for (std::size_t h = 0; h < cfg_.value_iters; ++h) {
      critic_opt_.zero_grad();
      const nn::Tensor loss = nn::mean(nn::square(net_.critic_value(feats) - target));
      if (!std::isfinite(loss.item())) throw NonFiniteLoss("ppo update: non-finite value loss");
      loss.backward();
      critic_opt_.step();
      ++rep.value_steps;
    }
    {
      nn::NoGradGuard guard;
      value_loss_sum += nn::mean(nn::square(net_.critic_value(feats) - target)).item();
      ++value_buffers;
    }
  }
  if (value_buffers > 0) rep.value_loss = value_loss_sum / double(value_buffers);
  return rep;
}

// Training driver

void write_curve_header(std::ostream& out) {
  out << "epoch,mean_reward,success_rate,mean_steps,kl,policy_loss,value_loss,wall_time_s\n";
}

void write_curve_row(std::ostream& out, const CurveRow& r) {
  out << r.epoch << ',' << format_number(r.mean_reward) << ',' << format_number(r.success_rate)
      << ',' << format_number(r.mean_steps) << ',' << format_number(r.kl) << ','
      << format_number(r.policy_loss) << ',' << format_number(r.value_loss) << ','
      << format_number(r.wall_time_s) << '\n';
}

namespace {

std::string epoch_name(std::size_t epoch) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "epoch_%04zu.ckpt", epoch);
  return buf;
}

}  // namespace

TrainResult train(const ExperimentConfig& cfg, const std::filesystem::path& out_dir,
                  std::ostream* log) {
  cfg.validate();
  const TrainConfig& tc = cfg.train;
  nn::NetworkConfig net_cfg = cfg.network_for_variant();
  net_cfg.init_seed = mix_seed(cfg.network.init_seed, tc.seed);
  TrainResult result{nn::Network(net_cfg), {}, false, {}};
  nn::Network& net = result.network;
  PpoTrainer trainer(net, tc);

  WorldConfig rollout_world = cfg.world();
  rollout_world.max_steps = tc.episode_max_steps;
  const WorldConfig eval_world = cfg.world();

  std::filesystem::create_directories(out_dir / "checkpoints");
  std::ofstream curve(out_dir / "curve.csv", std::ios::trunc);
  if (!curve) throw std::runtime_error("cannot write " + (out_dir / "curve.csv").string());
  write_curve_header(curve);

  struct Stage {
    std::size_t robots;
    std::size_t epochs;
  };
  const std::vector<Stage> stages{{tc.stage1_robots, tc.stage1_epochs},
                                  {tc.stage2_robots, tc.stage2_epochs}};
  std::size_t last_stage = 0;
  for (std::size_t s = 0; s < stages.size(); ++s) {
    if (stages[s].epochs > 0) last_stage = s;
  }

  nlohmann::json meta{{"variant", to_string(cfg.variant)}, {"seed", tc.seed}};
  const auto t0 = std::chrono::steady_clock::now();
  std::size_t epoch = 0;

  for (std::size_t s = 0; s < stages.size() && !result.early_stopped; ++s) {
    if (stages[s].epochs == 0) continue;
    ScenarioConfig sc = cfg.scenario;
    sc.robot_count = stages[s].robots;
    RolloutCollector collector(sc, rollout_world, mix_seed(tc.seed, 100 + s));
    std::size_t streak = 0;

    for (std::size_t e = 0; e < stages[s].epochs; ++e) {
      ++epoch;
      std::vector<RolloutBuffer> buffers = collector.collect(net, tc.steps_per_rollout);
      double reward_sum = 0.0;
      std::size_t reward_count = 0;
      for (RolloutBuffer& b : buffers) {
        for (const Transition& t : b.steps) reward_sum += t.reward;
        reward_count += b.steps.size();
        compute_gae(b, tc.gamma, tc.lambda);
      }
      UpdateReport up;
      try {
        up = trainer.update(buffers);
      } catch (const NonFiniteLoss&) {
        curve.flush();
        throw;
      }

      CurveRow row;
      row.epoch = epoch;
      row.stage = s + 1;
      row.mean_reward = reward_count ? reward_sum / double(reward_count) : 0.0;
      row.kl = up.kl;
      row.policy_loss = up.policy_loss;
      row.value_loss = up.value_loss;

      const bool evaluated =
          tc.eval_episodes > 0 && (epoch % tc.eval_every == 0 || e + 1 == stages[s].epochs);
      if (evaluated) {
        NetworkPolicy policy(net, true);
        const auto records =
            evaluate(sc, eval_world, policy, tc.eval_episodes, mix_seed(tc.seed, 0xe7a1));
        std::size_t ok = 0;
        double steps = 0.0;
        for (const EpisodeRecord& r : records) {
          ok += r.success() ? 1 : 0;
          steps += double(r.steps);
        }
        row.success_rate = double(ok) / double(records.size());
        row.mean_steps = steps / double(records.size());
      }
      if (tc.record_wall_time) {
        row.wall_time_s =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
      }
      write_curve_row(curve, row);
      curve.flush();
      result.curve.push_back(row);

      if (log) {
        *log << "epoch " << epoch << " stage " << row.stage << " reward "
             << format_number(row.mean_reward) << " success " << format_number(row.success_rate)
             << " steps " << format_number(row.mean_steps) << " kl " << format_number(row.kl)
             << " pi_steps " << up.policy_steps << '\n';
        log->flush();
      }

      meta["epoch"] = epoch;
      meta["stage"] = s + 1;
      if (tc.checkpoint_every > 0 && epoch % tc.checkpoint_every == 0) {
        save_checkpoint(out_dir / "checkpoints" / epoch_name(epoch), net, meta);
      }
      if (s == last_stage && evaluated) {
        streak = row.success_rate >= tc.stop_threshold ? streak + 1 : 0;
        if (tc.patience > 0 && streak >= tc.patience) {
          result.early_stopped = true;
          save_checkpoint(out_dir / "checkpoints" / epoch_name(epoch), net, meta);
          break;
        }
      }
    }
  }

  meta["epoch"] = epoch;
  meta["early_stopped"] = result.early_stopped;
  result.final_checkpoint = out_dir / "final.ckpt";
  save_checkpoint(result.final_checkpoint, net, meta);
  return result;
}

}  // namespace rvonav
