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

#include "cli.hpp"

#include <fstream>
#include <iostream>

#include <CLI11.hpp>

#include "rvonav/checkpoint.hpp"
#include "rvonav/ppo.hpp"
#include "svg.hpp"

namespace rvonav::cli {

namespace fs = std::filesystem;

namespace {

std::ofstream open_out(const fs::path& path) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream f(path, std::ios::trunc);
  if (!f) throw CliError(kExitInput, "cannot write " + path.string());
  return f;
}

std::vector<ScenarioKind> scenario_list(const ExperimentConfig& cfg) {
  return cfg.scenarios.empty() ? std::vector<ScenarioKind>{cfg.scenario.kind} : cfg.scenarios;
}

std::vector<std::size_t> robot_list(const ExperimentConfig& cfg) {
  return cfg.robot_counts.empty() ? std::vector<std::size_t>{cfg.scenario.robot_count}
                                  : cfg.robot_counts;
}

// Command-line values shared by several subcommands.
struct Overrides {
  std::string config;
  std::string out;
  std::optional<std::uint64_t> seed;
  std::string policy;
  std::optional<std::size_t> robots;
  std::string scenario;
  std::optional<std::size_t> episodes;
  std::string checkpoint;
};

void add_common(CLI::App* cmd, Overrides& o, bool eval_flags) {
  cmd->add_option("--config", o.config, "Experiment config (JSON)");
  cmd->add_option("--out", o.out, "Output directory");
  cmd->add_option("--seed", o.seed, "Base seed");
  if (!eval_flags) return;
  cmd->add_option("--policy", o.policy, "rlrvo or baseline");
  cmd->add_option("--robots", o.robots, "Robot count");
  cmd->add_option("--scenario", o.scenario, "circle, random or corridor");
  cmd->add_option("--episodes", o.episodes, "Episodes per configuration");
  cmd->add_option("--checkpoint", o.checkpoint, "Checkpoint for the rlrvo policy");
}

ExperimentConfig resolve(const Overrides& o) {
  ExperimentConfig cfg = o.config.empty() ? ExperimentConfig{} : load_experiment(o.config);
  try {
    if (o.seed) {
      cfg.seed = *o.seed;
      cfg.train.seed = *o.seed;
    }
    if (!o.policy.empty()) cfg.policy = parse_policy_kind(o.policy);
    if (o.robots) {
      cfg.scenario.robot_count = *o.robots;
      cfg.robot_counts.clear();
    }
    if (!o.scenario.empty()) {
      cfg.scenario.kind = parse_scenario_kind(o.scenario);
      cfg.scenarios.clear();
    }
    if (o.episodes) cfg.episodes = *o.episodes;
    if (!o.checkpoint.empty()) cfg.checkpoint = o.checkpoint;
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
  cfg.validate();
  return cfg;
}

int cmd_train(const Overrides& o, std::ostream& out) {
  const ExperimentConfig cfg = resolve(o);
  const fs::path dir = o.out.empty() ? fs::path("runs/train") : fs::path(o.out);
  TrainResult res = train(cfg, dir, &out);
  out << "trained " << res.curve.size() << " epochs"
      << (res.early_stopped ? " (early stop)" : "") << "; checkpoint " << res.final_checkpoint.string()
      << '\n';

  ExperimentConfig eval_cfg = cfg;
  eval_cfg.scenario.robot_count =
      cfg.train.stage2_epochs > 0 ? cfg.train.stage2_robots : cfg.train.stage1_robots;
  eval_cfg.robot_counts.clear();
  eval_cfg.scenarios.clear();
  eval_cfg.episodes = std::max<std::size_t>(1, cfg.train.eval_episodes);
  NetworkPolicy policy(res.network, true);
  const auto reports = run_evaluation(eval_cfg, policy, "rlrvo", {});
  print_report_table(out, reports);
  return kExitOk;
}

int cmd_eval(const Overrides& o, std::ostream& out) {
  const ExperimentConfig cfg = resolve(o);
  auto policy = make_policy(cfg);
  const fs::path dir = o.out.empty() ? fs::path("runs/eval") : fs::path(o.out);
  const auto reports = run_evaluation(cfg, *policy, policy->name(), dir);
  print_report_table(out, reports);
  return kExitOk;
}

int cmd_compare(const Overrides& o, std::ostream& out) {
  ExperimentConfig cfg = resolve(o);
  const fs::path dir = o.out.empty() ? fs::path("runs/compare") : fs::path(o.out);
  std::vector<EvalReport> all;
  for (PolicyKind kind : {PolicyKind::RlRvo, PolicyKind::Baseline}) {
    cfg.policy = kind;
    auto policy = make_policy(cfg);
    auto reports = run_evaluation(cfg, *policy, policy->name(), dir / policy->name());
    all.insert(all.end(), reports.begin(), reports.end());
  }
  auto f = open_out(dir / "comparison.csv");
  write_metrics_csv(f, all);
  print_report_table(out, all);
  return kExitOk;
}

int cmd_ablation(const Overrides& o, std::ostream& out) {
  ExperimentConfig cfg = resolve(o);
  const fs::path dir = o.out.empty() ? fs::path("runs/ablation") : fs::path(o.out);
  std::vector<Variant> variants = cfg.ablation_variants;
  if (variants.empty()) {
    variants = {Variant::RlRvo, Variant::NonRvoObs, Variant::UniRecurrent, Variant::DistanceReward};
  }
  if (cfg.scenarios.empty() && o.scenario.empty()) {
    cfg.scenarios = {ScenarioKind::Circle, ScenarioKind::Random, ScenarioKind::Corridor};
  }

  std::vector<std::pair<Variant, EvalReport>> rows;
  for (Variant v : variants) {
    const std::string name = to_string(v);
    fs::path ckpt;
    if (auto it = cfg.ablation_checkpoints.find(name); it != cfg.ablation_checkpoints.end()) {
      ckpt = it->second;
    }
    if (ckpt.empty() || !fs::exists(ckpt)) {
      if (!cfg.ablation_train_missing) {
        throw CliError(kExitInput, "missing checkpoint for variant '" + name + "'" +
                                       (ckpt.empty() ? std::string() : ": " + ckpt.string()));
      }
      ExperimentConfig tc = cfg;
      tc.variant = v;
      out << "training variant " << name << '\n';
      ckpt = train(tc, dir / ("train_" + name), &out).final_checkpoint;
    }
    auto policy = load_network_policy(ckpt, v);
    ExperimentConfig ec = cfg;
    ec.variant = v;
    for (const EvalReport& r : run_evaluation(ec, *policy, name, dir / name)) rows.emplace_back(v, r);
  }

  auto f = open_out(dir / "ablation.csv");
  f << "variant,scenario,robots,episodes,success_rate,travel_steps_mean,travel_steps_std,"
       "speed_mean,speed_std\n";
  std::vector<EvalReport> table;
  for (const auto& [v, r] : rows) {
    f << to_string(v) << ',' << r.scenario << ',' << r.robots << ',' << r.episode_count << ','
      << format_number(r.success_rate) << ',' << format_number(r.travel_steps_mean) << ','
      << format_number(r.travel_steps_std) << ',' << format_number(r.speed_mean) << ','
      << format_number(r.speed_std) << '\n';
    table.push_back(r);
  }
  print_report_table(out, table);
  return kExitOk;
}

int cmd_plot(const std::string& record, const std::string& svg_path, double radius,
             std::ostream& out) {
  std::ifstream in(record);
  if (!in) throw CliError(kExitInput, "cannot open record CSV: " + record);
  const auto rows = read_record_csv(in);
  PlotOptions opt;
  opt.robot_radius = radius;
  const fs::path target = svg_path.empty() ? fs::path(record).replace_extension(".svg")
                                           : fs::path(svg_path);
  auto f = open_out(target);
  write_trajectory_svg(f, rows, {}, opt);
  out << "wrote " << target.string() << '\n';
  return kExitOk;
}

}  // namespace

std::unique_ptr<NetworkPolicy> load_network_policy(const fs::path& checkpoint,
                                                   std::optional<Variant> expected) {
  if (checkpoint.empty()) throw CliError(kExitInput, "the rlrvo policy needs a checkpoint");
  if (!fs::exists(checkpoint)) {
    throw CliError(kExitInput, "checkpoint not found: " + checkpoint.string());
  }
  Checkpoint ck = load_checkpoint(checkpoint);
  if (expected) {
    const std::string want = to_string(*expected);
    const std::string got = ck.meta.value("variant", std::string("rlrvo"));
    if (got != want) {
      throw CliError(kExitInput, "checkpoint " + checkpoint.string() + " was trained as '" + got +
                                     "', expected '" + want + "'");
    }
  }
  return std::make_unique<NetworkPolicy>(std::move(ck.network), true);
}

std::unique_ptr<Policy> make_policy(const ExperimentConfig& cfg) {
  if (cfg.policy == PolicyKind::Baseline) return std::make_unique<BaselinePolicy>(cfg.sampler);
  return load_network_policy(cfg.checkpoint);
}

std::vector<EvalReport> run_evaluation(const ExperimentConfig& cfg, Policy& policy,
                                       const std::string& label, const fs::path& out_dir) {
  std::vector<EvalReport> reports;
  const WorldConfig world = cfg.world();
  for (ScenarioKind kind : scenario_list(cfg)) {
    for (std::size_t n : robot_list(cfg)) {
      ScenarioConfig sc = cfg.scenario;
      sc.kind = kind;
      sc.robot_count = n;
      const auto records = evaluate(sc, world, policy, cfg.episodes, cfg.seed);
      EvalReport rep = summarize(records, world.kinematics.dt);
      rep.scenario = to_string(kind);
      rep.policy = label;
      rep.robots = n;
      reports.push_back(rep);
      if (out_dir.empty()) continue;
      for (std::size_t k = 0; k < std::min(cfg.records, records.size()); ++k) {
        auto f = open_out(out_dir / "records" /
                          (rep.scenario + "_n" + std::to_string(n) + "_ep" + std::to_string(k) +
                           ".csv"));
        write_record_csv(f, records[k]);
      }
    }
  }
  if (!out_dir.empty()) {
    auto m = open_out(out_dir / "metrics.csv");
    write_metrics_csv(m, reports);
    auto t = open_out(out_dir / "timing.csv");
    write_timing_csv(t, reports);
  }
  return reports;
}

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Multi-robot navigation with velocity-obstacle observations", "rvo-nav"};
  app.require_subcommand(1);

  Overrides train_o, eval_o, ablation_o, compare_o;
  add_common(app.add_subcommand("train", "Train a policy"), train_o, false);
  add_common(app.add_subcommand("eval", "Evaluate a policy"), eval_o, true);
  add_common(app.add_subcommand("ablation", "Evaluate the ablation variants"), ablation_o, true);
  add_common(app.add_subcommand("compare", "Evaluate the learned policy against the baseline"),
             compare_o, true);
  auto* plot = app.add_subcommand("plot", "Render an episode record as SVG");
  std::string record, svg;
  double radius = 0.2;
  plot->add_option("--record", record, "Episode record CSV")->required();
  plot->add_option("--out", svg, "Output SVG path");
  plot->add_option("--radius", radius, "Robot radius drawn at the final positions (m)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) {
      out << app.help();
      return kExitOk;
    }
    err << "rvo-nav: " << e.what() << '\n';
    return kExitInput;
  }

  try {
    if (app.got_subcommand("train")) return cmd_train(train_o, out);
    if (app.got_subcommand("eval")) return cmd_eval(eval_o, out);
    if (app.got_subcommand("ablation")) return cmd_ablation(ablation_o, out);
    if (app.got_subcommand("compare")) return cmd_compare(compare_o, out);
    if (app.got_subcommand("plot")) return cmd_plot(record, svg, radius, out);
  } catch (const CliError& e) {
    err << "rvo-nav: " << e.what() << '\n';
    return e.code();
  } catch (const NonFiniteLoss& e) {
    err << "rvo-nav: training diverged: " << e.what() << '\n';
    return kExitDiverged;
  } catch (const ConfigError& e) {
    err << "rvo-nav: " << e.what() << '\n';
    return kExitInput;
  } catch (const CheckpointError& e) {
    err << "rvo-nav: " << e.what() << '\n';
    return kExitInput;
  } catch (const RecordFormatError& e) {
    err << "rvo-nav: " << e.what() << '\n';
    return kExitInput;
  } catch (const PackingError& e) {
    err << "rvo-nav: " << e.what() << '\n';
    return kExitInput;
  }
  return kExitInput;
}

}  // namespace rvonav::cli
