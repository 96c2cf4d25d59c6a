/*
 * SPDX-FileCopyrightText: Copyright (c) 2026 The tessac Authors. All rights reserved.
 * SPDX-License-Identifier: Apache-2.0
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 * http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

// Command-line front end: train, sweep, ablate, plot, normalize.

#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "tessac/config.hpp"
#include "tessac/experiment.hpp"
#include "tessac/normalize.hpp"
#include "tessac/plot.hpp"

namespace {

using tessac::ExperimentConfig;

struct ExperimentFlags {
  std::string config_file;
  std::optional<std::string> env, agent, scheduler, out;
  std::optional<long long> total_steps, eval_interval, T;
  std::optional<double> lambda, avg_threshold, std_threshold, k, C;
  std::vector<std::uint64_t> seeds;
  bool consecutive = false;
  bool twin_critic = false;
  bool large_preset = false;
  std::vector<std::string> sets;
  unsigned workers = 0;
};

void add_experiment_flags(CLI::App* app, ExperimentFlags& f) {
  app->add_option("-c,--config", f.config_file, "config file (sections: experiment, agent, scheduler)")
      ->check(CLI::ExistingFile);
  app->add_option("--env", f.env, "gridworld5 | chain10 | twingrid5");
  app->add_option("--agent", f.agent, "sac | sql");
  app->add_option("--scheduler", f.scheduler, "constant | fixed | tes");
  app->add_option("--out", f.out, "output directory (default $TESSAC_OUT or ./runs)");
  app->add_option("--total-steps", f.total_steps, "environment steps per run");
  app->add_option("--eval-interval", f.eval_interval, "steps between logged rows");
  app->add_option("--lambda", f.lambda, "EMA discount of the entropy window");
  app->add_option("--avg-threshold", f.avg_threshold, "window half-width around the target");
  app->add_option("--std-threshold", f.std_threshold, "maximum EMA std for a window hit");
  app->add_option("--k", f.k, "target entropy drop factor");
  app->add_option("--T", f.T, "window hits per drop");
  app->add_option("--C", f.C, "constant target fraction of log|A| (initial fraction for tes)");
  app->add_flag("--consecutive", f.consecutive, "reset the hit counter when the window is missed");
  app->add_flag("--twin-critic", f.twin_critic, "use the min of two critics");
  app->add_flag("--paper-hparams", f.large_preset, "512x2 networks, batch 256, buffer 1e5");
  app->add_option("--set", f.sets, "override any config key: section.key=value");
  app->add_option("--workers", f.workers, "parallel seed workers (0 = hardware threads)");
}

ExperimentConfig resolve(const ExperimentFlags& f) {
  ExperimentConfig c = f.config_file.empty() ? ExperimentConfig{} : tessac::load_config(f.config_file);
  if (f.config_file.empty()) {
    if (const char* out = std::getenv("TESSAC_OUT"); out != nullptr && *out != '\0') c.output_dir = out;
  }
  if (f.large_preset) tessac::apply_large_preset(c);
  const auto set = [&](const char* key, const auto& value) {
    if (value) tessac::set_config_value(c, key, [&] {
                 if constexpr (std::is_same_v<std::decay_t<decltype(*value)>, std::string>) {
                   return *value;
                 } else if constexpr (std::is_floating_point_v<std::decay_t<decltype(*value)>>) {
                   return tessac::format_double(*value);
                 } else {
                   return std::to_string(*value);
                 }
               }());
  };
  set("experiment.env", f.env);
  set("experiment.agent", f.agent);
  set("scheduler.scheduler", f.scheduler);
  set("experiment.output_dir", f.out);
  set("experiment.total_steps", f.total_steps);
  set("experiment.eval_interval", f.eval_interval);
  set("scheduler.lambda", f.lambda);
  set("scheduler.avg_threshold", f.avg_threshold);
  set("scheduler.std_threshold", f.std_threshold);
  set("scheduler.k", f.k);
  set("scheduler.T", f.T);
  set("scheduler.C", f.C);
  if (f.consecutive) c.consecutive = true;
  if (f.twin_critic) c.agent_config.twin_critic = true;
  if (!f.seeds.empty()) c.seeds = f.seeds;
  for (const auto& kv : f.sets) {
    const auto eq = kv.find('=');
    if (eq == std::string::npos) throw tessac::ConfigError("--set " + kv + ": expected section.key=value");
    tessac::set_config_value(c, kv.substr(0, eq), kv.substr(eq + 1));
  }
  c.validate();
  return c;
}

void report(const tessac::SweepResult& r) {
  std::cout << r.label << ": mean final return " << r.mean_final;
  if (r.std_final) std::cout << " +- " << *r.std_final;
  std::cout << " over " << r.seeds.size() << " seed(s)\n";
  for (const auto& s : r.seeds) std::cout << "  seed " << s.seed << ": " << s.final_score << "  " << s.csv_path << "\n";
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"tessac: maximum-entropy RL with target entropy scheduling"};
  app.require_subcommand(1);

  ExperimentFlags train_flags;
  auto* train = app.add_subcommand("train", "train one seed and write its CSV");
  add_experiment_flags(train, train_flags);
  std::optional<std::uint64_t> train_seed;
  train->add_option("--seed", train_seed, "seed (default: first configured seed)");

  ExperimentFlags sweep_flags;
  auto* sweep = app.add_subcommand("sweep", "train every seed and summarize");
  add_experiment_flags(sweep, sweep_flags);
  sweep->add_option("--seeds", sweep_flags.seeds, "seed list")->delimiter(',');

  ExperimentFlags ablate_flags;
  std::string axis;
  std::vector<std::string> axis_values;
  auto* ablate = app.add_subcommand("ablate", "sweep across an ablation axis");
  add_experiment_flags(ablate, ablate_flags);
  ablate->add_option("--seeds", ablate_flags.seeds, "seed list")->delimiter(',');
  ablate->add_option("--axis", axis, "std_threshold | schedule_type")->required();
  ablate->add_option("--values", axis_values, "axis values (default: the standard set)")->delimiter(',');

  std::string quantity = "episode_return_mean";
  std::string plot_output = "plot.svg";
  std::vector<std::string> plot_inputs;
  auto* plot = app.add_subcommand("plot", "render run CSVs to SVG");
  plot->add_option("-q,--quantity", quantity, "CSV column to plot");
  plot->add_option("-o,--output", plot_output, "SVG file");
  plot->add_option("csv", plot_inputs, "run CSV files")->required()->check(CLI::ExistingFile);

  std::vector<std::string> score_args;
  std::vector<std::string> baseline_names;
  auto* norm = app.add_subcommand("normalize", "rescale scores so worst/best baseline map to 0/1");
  norm->add_option("--scores", score_args, "name=score pairs")->required()->delimiter(',');
  norm->add_option("--baselines", baseline_names, "names of the fixed-target baselines")->required()->delimiter(',');

  CLI11_PARSE(app, argc, argv);

  try {
    if (*train) {
      ExperimentConfig c = resolve(train_flags);
      if (train_seed) c.seeds = {*train_seed};
      c.seeds.resize(1);
      report(tessac::run_experiment(c, 1));
    } else if (*sweep) {
      const ExperimentConfig c = resolve(sweep_flags);
      const auto result = tessac::run_experiment(c, sweep_flags.workers);
      tessac::write_sweep_results({result}, (std::filesystem::path(c.output_dir) / "sweep.json").string());
      report(result);
    } else if (*ablate) {
      const ExperimentConfig c = resolve(ablate_flags);
      const auto parsed = tessac::parse_ablation_axis(axis);
      const auto values = ablate->count("--values") > 0 ? axis_values : tessac::default_axis_values(parsed);
      const auto results = tessac::run_ablation(c, parsed, values, ablate_flags.workers);
      std::filesystem::create_directories(c.output_dir);
      tessac::write_sweep_results(results, (std::filesystem::path(c.output_dir) / "ablation.json").string());
      for (const auto& r : results) report(r);
    } else if (*plot) {
      tessac::plot(tessac::load_plot_series(plot_inputs), quantity, plot_output);
      std::cout << "wrote " << plot_output << "\n";
    } else if (*norm) {
      std::map<std::string, double> scores;
      for (const auto& arg : score_args) {
        const auto eq = arg.find('=');
        if (eq == std::string::npos) throw std::invalid_argument("--scores " + arg + ": expected name=score");
        scores[arg.substr(0, eq)] = std::stod(arg.substr(eq + 1));
      }
      for (const auto& [name, value] : tessac::normalize(scores, baseline_names)) {
        std::cout << name << " " << tessac::format_double(value) << "\n";
      }
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
