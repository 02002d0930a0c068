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
#include <filesystem>
#include <fstream>
#include <limits>
#include <numeric>
#include <random>
#include <sstream>
#include <vector>

#include "rvonav/checkpoint.hpp"
#include "rvonav/config.hpp"
#include "rvonav/policy.hpp"
#include "rvonav/ppo.hpp"

namespace rvonav {
namespace {

namespace fs = std::filesystem;

fs::path scratch(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / ("rvonav_test_" + name);
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

// Direct definition: A_t = sum_l (gamma lambda)^l delta_{t+l}, truncated at the first done.
std::vector<double> brute_gae(const std::vector<double>& r, const std::vector<double>& v,
                              const std::vector<bool>& done, double boot, double g, double l) {
  const std::size_t n = r.size();
  std::vector<double> delta(n);
  for (std::size_t t = 0; t < n; ++t) {
    const double next = t + 1 < n ? v[t + 1] : boot;
    delta[t] = r[t] + (done[t] ? 0.0 : g * next) - v[t];
  }
  std::vector<double> adv(n);
  for (std::size_t t = 0; t < n; ++t) {
    double a = 0.0, w = 1.0;
    for (std::size_t k = t; k < n; ++k) {
      a += w * delta[k];
      if (done[k]) break;
      w *= g * l;
    }
    adv[t] = a;
  }
  return adv;
}

TEST(Gae, LambdaZeroIsOneStepTd) {
  const std::vector<double> r{1.0, -0.5, 2.0}, v{0.3, 0.1, -0.2};
  const GaeResult g = compute_gae(r, v, {false, false, false}, 0.7, 0.9, 0.0);
  EXPECT_NEAR(g.advantages[0], 1.0 + 0.9 * 0.1 - 0.3, 1e-12);
  EXPECT_NEAR(g.advantages[1], -0.5 + 0.9 * -0.2 - 0.1, 1e-12);
  EXPECT_NEAR(g.advantages[2], 2.0 + 0.9 * 0.7 + 0.2, 1e-12);
}

TEST(Gae, LambdaOneZeroValuesIsDiscountedReturn) {
  const std::vector<double> r{3.0, 2.0, 1.0}, v{0.0, 0.0, 0.0};
  const GaeResult g = compute_gae(r, v, {false, false, true}, 0.0, 0.5, 1.0);
  EXPECT_DOUBLE_EQ(g.advantages[0], 4.25);
  EXPECT_DOUBLE_EQ(g.advantages[1], 2.5);
  EXPECT_DOUBLE_EQ(g.advantages[2], 1.0);
  EXPECT_DOUBLE_EQ(g.returns[0], 4.25);
}

TEST(Gae, MatchesBruteForceWithEpisodeBoundaries) {
  std::mt19937_64 rng(41);
  std::uniform_real_distribution<double> u(-2.0, 2.0);
  std::bernoulli_distribution b(0.1);
  for (int k = 0; k < 100; ++k) {
    const std::size_t n = 1 + std::size_t(k % 37);
    std::vector<double> r(n), v(n);
    std::vector<bool> d(n);
    for (std::size_t t = 0; t < n; ++t) {
      r[t] = u(rng);
      v[t] = u(rng);
      d[t] = b(rng);
    }
    const double boot = u(rng);
    const GaeResult g = compute_gae(r, v, d, boot, 0.99, 0.95);
    const std::vector<double> ref = brute_gae(r, v, d, boot, 0.99, 0.95);
    for (std::size_t t = 0; t < n; ++t) {
      EXPECT_NEAR(g.advantages[t], ref[t], 1e-10);
      EXPECT_NEAR(g.returns[t], ref[t] + v[t], 1e-10);
    }
  }
}

TEST(Gae, BufferOverloadFillsFields) {
  RolloutBuffer buf;
  for (double r : {1.0, 2.0}) {
    Transition t;
    t.reward = r;
    buf.steps.push_back(t);
  }
  buf.steps.back().done = true;
  compute_gae(buf, 0.5, 1.0);
  ASSERT_EQ(buf.advantages.size(), 2u);
  EXPECT_DOUBLE_EQ(buf.advantages[0], 2.0);
  EXPECT_DOUBLE_EQ(buf.returns[1], 2.0);
}

TEST(NormalizeAdvantages, ZeroMeanUnitStd) {
  std::vector<double> a{1.0, 5.0, -2.0, 0.5};
  normalize_advantages(a);
  const double m = std::accumulate(a.begin(), a.end(), 0.0) / 4.0;
  double s = 0.0;
  for (double x : a) s += (x - m) * (x - m);
  EXPECT_NEAR(m, 0.0, 1e-12);
  EXPECT_NEAR(std::sqrt(s / 4.0), 1.0, 1e-6);
}

TEST(NormalizeAdvantages, InvariantToAffineShift) {
  std::vector<double> a{0.3, -1.2, 4.0, 2.2, 0.0};
  std::vector<double> b = a;
  for (double& x : b) x = 7.0 * x - 3.0;
  normalize_advantages(a);
  normalize_advantages(b);
  for (std::size_t i = 0; i < a.size(); ++i) EXPECT_NEAR(a[i], b[i], 1e-9);
}

TEST(NormalizeAdvantages, ConstantBecomesZero) {
  std::vector<double> a(5, 2.5);
  normalize_advantages(a);
  for (double x : a) EXPECT_EQ(x, 0.0);
}

TEST(ClippedSurrogate, OutsideClipHasZeroGradient) {
  nn::Matrix old(2, 1), adv(2, 1);
  old << 0.0, 0.0;
  adv << 1.0, -1.0;
  // ratio 1.5 with positive advantage and 0.5 with negative advantage: both clipped.
  nn::Matrix lp(2, 1);
  lp << std::log(1.5), std::log(0.5);
  nn::Tensor logp(lp, true);
  nn::clipped_surrogate(logp, old, adv, 0.2).backward();
  EXPECT_EQ(logp.grad().norm(), 0.0);
}

nn::NetworkConfig bandit_net() {
  nn::NetworkConfig cfg;
  cfg.hidden = 8;
  cfg.fc = 16;
  cfg.init_seed = 3;
  return cfg;
}

Observation bandit_obs() {
  Observation o;
  o.self_block = {0.2, -0.1, 0.4, 1.0, 0.0, 0.2};
  return o;
}

// One-step episodes: reward depends only on the action.
std::vector<RolloutBuffer> bandit_rollout(const nn::Network& net, std::mt19937_64& rng,
                                          const Vec2& target, std::size_t n) {
  RolloutBuffer buf;
  const Observation o = bandit_obs();
  const nn::ActionDistribution d = net.distribution(o);
  const double v = net.value(o);
  for (std::size_t k = 0; k < n; ++k) {
    const nn::SampledAction s = nn::sample_action(d, rng);
    Transition t;
    t.obs = o;
    t.action = s.action;
    t.logp_old = s.logp;
    t.value = v;
    t.reward = -squared_norm(s.action - target);
    t.done = true;
    buf.steps.push_back(t);
  }
  compute_gae(buf, 0.99, 0.95);
  return {buf};
}

TEST(PpoTrainer, BanditConverges) {
  nn::Network net(bandit_net());
  TrainConfig cfg;
  cfg.lr_actor = 3e-3;
  cfg.lr_critic = 3e-3;
  cfg.policy_iters = 10;
  cfg.value_iters = 10;
  cfg.kl_limit = 0.02;
  PpoTrainer trainer(net, cfg);
  std::mt19937_64 rng(42);
  const Vec2 target{0.5, -0.3};
  for (int it = 0; it < 200; ++it) {
    const auto bufs = bandit_rollout(net, rng, target, 64);
    trainer.update(bufs);
  }
  const nn::ActionDistribution d = net.distribution(bandit_obs());
  EXPECT_NEAR(d.mean[0], target.x, 0.05);
  EXPECT_NEAR(d.mean[1], target.y, 0.05);
}

TEST(PpoTrainer, KlLimitStopsEarly) {
  nn::Network net(bandit_net());
  TrainConfig cfg;
  cfg.lr_actor = 5e-2;
  cfg.policy_iters = 50;
  cfg.value_iters = 1;
  cfg.kl_limit = 1e-3;
  PpoTrainer trainer(net, cfg);
  std::mt19937_64 rng(43);
  const auto bufs = bandit_rollout(net, rng, {0.9, 0.9}, 64);
  const UpdateReport rep = trainer.update(bufs);
  EXPECT_EQ(rep.early_stops, 1u);
  EXPECT_LT(rep.policy_steps, 50u);
  ASSERT_EQ(rep.kl_trace.size(), rep.policy_steps + 1);
  EXPECT_GT(rep.kl_trace.back(), cfg.kl_limit);
  for (std::size_t k = 0; k + 1 < rep.kl_trace.size(); ++k) EXPECT_LE(rep.kl_trace[k], cfg.kl_limit);
  EXPECT_NEAR(rep.kl_trace.front(), 0.0, 1e-12);
}

TEST(PpoTrainer, ValueLossDecreases) {
  nn::Network net(bandit_net());
  TrainConfig cfg;
  cfg.policy_iters = 0;
  cfg.value_iters = 20;
  cfg.lr_critic = 1e-2;
  PpoTrainer trainer(net, cfg);
  std::mt19937_64 rng(44);
  auto bufs = bandit_rollout(net, rng, {0.0, 0.0}, 32);
  for (double& r : bufs[0].returns) r = 3.0;
  const double first = trainer.update(bufs).value_loss;
  double last = first;
  for (int k = 0; k < 5; ++k) last = trainer.update(bufs).value_loss;
  EXPECT_LT(last, 0.1 * first);
}

TEST(PpoTrainer, NonFiniteAdvantageThrows) {
  nn::Network net(bandit_net());
  TrainConfig cfg;
  cfg.normalize_advantages = false;
  PpoTrainer trainer(net, cfg);
  std::mt19937_64 rng(45);
  auto bufs = bandit_rollout(net, rng, {0.0, 0.0}, 8);
  bufs[0].advantages[0] = std::numeric_limits<double>::quiet_NaN();
  EXPECT_THROW(trainer.update(bufs), NonFiniteLoss);
}

ScenarioConfig four_circle() {
  ScenarioConfig s;
  s.kind = ScenarioKind::Circle;
  s.robot_count = 4;
  return s;
}

WorldConfig rollout_world() {
  WorldConfig w;
  w.max_steps = 150;
  return w;
}

TEST(RolloutCollector, FillsEveryBufferAndIsDeterministic) {
  const nn::Network net(bandit_net());
  RolloutCollector a(four_circle(), rollout_world(), 7), b(four_circle(), rollout_world(), 7);
  const auto ba = a.collect(net, 450);
  const auto bb = b.collect(net, 450);
  ASSERT_EQ(ba.size(), 4u);
  for (std::size_t i = 0; i < 4; ++i) {
    ASSERT_EQ(ba[i].size(), 450u);
    ASSERT_EQ(bb[i].size(), 450u);
    for (std::size_t k = 0; k < 450; ++k) {
      EXPECT_EQ(ba[i].steps[k].action, bb[i].steps[k].action);
      EXPECT_EQ(ba[i].steps[k].reward, bb[i].steps[k].reward);
      EXPECT_EQ(ba[i].steps[k].done, bb[i].steps[k].done);
    }
    EXPECT_EQ(ba[i].bootstrap_value, bb[i].bootstrap_value);
  }
  EXPECT_GE(a.episodes_started(), 3u);  // 450 steps cannot fit in two 150-step episodes
  EXPECT_GE(a.episodes_finished(), 2u);
}

TEST(RolloutCollector, RecordsSnapshotLogProbAndValue) {
  const nn::Network net(bandit_net());
  RolloutCollector c(four_circle(), rollout_world(), 8);
  const auto bufs = c.collect(net, 40);
  for (const RolloutBuffer& buf : bufs) {
    for (const Transition& t : buf.steps) {
      EXPECT_NEAR(t.logp_old, nn::log_prob(net.distribution(t.obs), t.action), 1e-9);
      EXPECT_NEAR(t.value, net.value(t.obs), 1e-9);
      EXPECT_TRUE(std::isfinite(t.reward));
    }
  }
}

TEST(RolloutCollector, RewardsReplayInWorld) {
  const nn::Network net(bandit_net());
  RolloutCollector c(four_circle(), rollout_world(), 9);
  const auto bufs = c.collect(net, 200);
  ScenarioConfig sc = four_circle();
  sc.rng_seed = mix_seed(9, 0);
  World w(rollout_world(), generate_scenario(sc));
  std::size_t compared = 0;
  for (std::size_t k = 0; !w.done(); ++k) {
    std::vector<Vec2> acts(4);
    for (std::size_t i = 0; i < 4; ++i) {
      if (k < bufs[i].size()) acts[i] = bufs[i].steps[k].action;
    }
    const StepOutcome out = w.step(acts);
    for (std::size_t i = 0; i < 4; ++i) {
      if (!out.robots[i].was_active) continue;
      ASSERT_LT(k, bufs[i].size());
      EXPECT_EQ(out.robots[i].reward, bufs[i].steps[k].reward);
      EXPECT_EQ(out.robots[i].done || out.episode_done, bufs[i].steps[k].done);
      ++compared;
    }
  }
  EXPECT_GT(compared, 4u);
}

TEST(Train, SingleEpochWritesOneRow) {
  ExperimentConfig cfg;
  cfg.network.hidden = 8;
  cfg.network.fc = 8;
  cfg.train.stage1_epochs = 0;
  cfg.train.stage2_epochs = 1;
  cfg.train.stage2_robots = 4;
  cfg.train.steps_per_rollout = 20;
  cfg.train.policy_iters = 2;
  cfg.train.value_iters = 2;
  cfg.train.eval_episodes = 1;
  cfg.train.record_wall_time = false;
  const fs::path dir = scratch("train_one");
  const TrainResult r = train(cfg, dir);
  ASSERT_EQ(r.curve.size(), 1u);
  EXPECT_EQ(r.curve[0].epoch, 1u);
  EXPECT_TRUE(fs::exists(dir / "curve.csv"));
  EXPECT_TRUE(fs::exists(r.final_checkpoint));
  std::ifstream in(dir / "curve.csv");
  std::string line;
  std::size_t lines = 0;
  while (std::getline(in, line)) ++lines;
  EXPECT_EQ(lines, 2u);
}

TEST(Train, CurveIsDeterministic) {
  ExperimentConfig cfg;
  cfg.network.hidden = 8;
  cfg.network.fc = 8;
  cfg.train.stage1_epochs = 2;
  cfg.train.stage2_epochs = 0;
  cfg.train.steps_per_rollout = 20;
  cfg.train.policy_iters = 2;
  cfg.train.value_iters = 2;
  cfg.train.eval_episodes = 1;
  cfg.train.record_wall_time = false;
  cfg.train.seed = 5;
  const fs::path d1 = scratch("train_det1"), d2 = scratch("train_det2");
  train(cfg, d1);
  train(cfg, d2);
  auto slurp = [](const fs::path& p) {
    std::ifstream in(p);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
  };
  EXPECT_EQ(slurp(d1 / "curve.csv"), slurp(d2 / "curve.csv"));
  EXPECT_EQ(slurp(d1 / "final.ckpt"), slurp(d2 / "final.ckpt"));
}

TEST(Checkpoint, RoundTripIsBitwise) {
  nn::NetworkConfig ncfg = bandit_net();
  ncfg.encoder = nn::EncoderKind::UniLstm;
  const nn::Network net(ncfg);
  const fs::path p = scratch("ckpt") / "sub" / "a.ckpt";
  save_checkpoint(p, net, {{"variant", "lstm"}});
  const Checkpoint ck = load_checkpoint(p);
  EXPECT_EQ(ck.meta["variant"], "lstm");
  const auto a = net.named_parameters(), b = ck.network.named_parameters();
  ASSERT_EQ(a.size(), b.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    EXPECT_EQ(a[i].first, b[i].first);
    EXPECT_EQ(a[i].second.value(), b[i].second.value());
  }
  const Observation o = bandit_obs();
  EXPECT_EQ(net.distribution(o).mean, ck.network.distribution(o).mean);
}

TEST(Checkpoint, RejectsCorruptFiles) {
  const fs::path dir = scratch("ckpt_bad");
  EXPECT_THROW(load_checkpoint(dir / "missing.ckpt"), CheckpointError);
  std::ofstream(dir / "junk.ckpt") << "not a checkpoint";
  EXPECT_THROW(load_checkpoint(dir / "junk.ckpt"), CheckpointError);
  const nn::Network net(bandit_net());
  save_checkpoint(dir / "ok.ckpt", net, {});
  const auto size = fs::file_size(dir / "ok.ckpt");
  fs::resize_file(dir / "ok.ckpt", size - 8);
  EXPECT_THROW(load_checkpoint(dir / "ok.ckpt"), CheckpointError);
}

}  // namespace
}  // namespace rvonav
