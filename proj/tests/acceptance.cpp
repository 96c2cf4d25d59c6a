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
// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit if any fail.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <numeric>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "gradient_check.hpp"
#include "tessac/agents.hpp"
#include "tessac/config.hpp"
#include "tessac/experiment.hpp"
#include "tessac/normalize.hpp"
#include "tessac/run_log.hpp"
#include "tessac/scheduler.hpp"

namespace {

namespace fs = std::filesystem;
using namespace tessac;
using Clock = std::chrono::steady_clock;

int failures = 0;

void report(int id, bool ok, const std::string& detail) {
  std::printf("%s criterion %d: %s\n", ok ? "PASS" : "FAIL", id, detail.c_str());
  std::fflush(stdout);
  if (!ok) ++failures;
}

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

std::string fmt(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.4g", v);
  return buf;
}

struct TrainedRun {
  std::unique_ptr<Agent> agent;
  RunLog log;
};

TrainedRun train_config(const ExperimentConfig& config, std::uint64_t seed) {
  TabularEnv env = make_env(config.env);
  const int actions = env.spec().action_count;
  TrainedRun run;
  run.agent = make_agent(config.agent, env.spec().observation_dim, actions, config.agent_config,
                         config.make_controller(actions), seed);
  TrainOptions options;
  options.total_steps = config.total_steps;
  options.eval_interval = config.eval_interval;
  options.eval_episodes = config.eval_episodes;
  options.seed = seed;
  run.log = train(*run.agent, std::move(env), options);
  return run;
}

// Least-squares slope of y against x.
double slope(const std::vector<double>& x, const std::vector<double>& y) {
  const double n = static_cast<double>(x.size());
  const double mx = std::accumulate(x.begin(), x.end(), 0.0) / n;
  const double my = std::accumulate(y.begin(), y.end(), 0.0) / n;
  double sxy = 0.0, sxx = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxy += (x[i] - mx) * (y[i] - my);
    sxx += (x[i] - mx) * (x[i] - mx);
  }
  return sxy / sxx;
}

// Every TES run produced by the suite, checked by criterion 5.
std::vector<std::pair<std::string, RunLog>> tes_logs;

void gradient_suite() {
  const auto start = Clock::now();
  const auto critic = testing::critic_gradient_suite(60, 11);
  const auto actor = testing::actor_gradient_suite(60, 12);
  const auto temperature = testing::temperature_gradient_suite(60, 13);
  const auto sql = testing::sql_temperature_gradient_suite(60, 14);
  const double elapsed = seconds_since(start);
  const bool ok = critic.ok() && actor.ok() && temperature.ok() && sql.ok() && elapsed < 30.0;
  report(1, ok,
         "gradients vs central differences: critic " + std::to_string(critic.passed) + "/" +
             std::to_string(critic.total) + ", actor " + std::to_string(actor.passed) + "/" +
             std::to_string(actor.total) + ", temperature " + std::to_string(temperature.passed) + "/" +
             std::to_string(temperature.total) + ", sql temperature " + std::to_string(sql.passed) + "/" +
             std::to_string(sql.total) + " in " + fmt(elapsed) + " s");
}

void scheduler_oracle() {
  // Hand trace.
  SchedulerConfig trace;
  trace.initial_target = std::log(2.0);
  trace.T = 3;
  SchedulerState s = SchedulerState::initial(trace);
  for (int i = 0; i < 3; ++i) tes_step(s, trace, std::log(2.0));
  const bool hand = s.target_entropy == 0.9 * std::log(2.0) && s.condition_counter == 0;

  // EMA against an unrolled oracle.
  std::mt19937_64 rng(21);
  std::normal_distribution<double> noise(0.9, 0.2);
  SchedulerState e{0.0, 1.0, 0.0, 0};
  std::vector<double> xs(10000);
  for (double& x : xs) {
    x = noise(rng);
    ema_update(e, x, 0.999);
  }
  long double mu = 1.0L, var = 0.0L;
  const long double lambda = 0.999L;
  for (double x : xs) {
    const long double d = x - mu;
    mu = lambda * mu + (1.0L - lambda) * x;
    var = lambda * (var + (1.0L - lambda) * d * d);
  }
  const double ema_err = std::max(std::abs(e.ema_mean - static_cast<double>(mu)),
                                  std::abs(e.ema_var - static_cast<double>(var)));

  // Replay a real run's entropy sequence through a fresh scheduler.
  ExperimentConfig config;
  config.env = "gridworld5";
  config.total_steps = 8000;
  config.T = 50;
  config.lambda = 0.99;
  const TrainedRun run = train_config(config, 0);
  tes_logs.emplace_back("scheduler replay run", run.log);
  SchedulerConfig sc;
  sc.lambda = config.lambda;
  sc.avg_threshold = config.avg_threshold;
  sc.std_threshold = config.std_threshold;
  sc.k = config.k;
  sc.T = config.T;
  sc.initial_target = config.C * std::log(4.0);
  SchedulerState replay = SchedulerState::initial(sc);
  bool identical = !run.log.entropy_trace.empty();
  int drops = 0;
  for (std::size_t i = 0; i < run.log.entropy_trace.size(); ++i) {
    const double before = replay.target_entropy;
    const double target = tes_step(replay, sc, run.log.entropy_trace[i]);
    if (target != run.log.target_trace[i]) identical = false;
    if (target < before) ++drops;
  }
  report(2, hand && ema_err <= 1e-9 && identical,
         std::string("hand trace ") + (hand ? "exact" : "WRONG") + ", EMA max error " + fmt(ema_err) +
             " over 1e4 steps, replay of " + std::to_string(run.log.entropy_trace.size()) + " logged entropies " +
             (identical ? "identical" : "DIFFERS") + " (" + std::to_string(drops) + " drops)");
}

void alpha_dynamics() {
  const std::vector<std::uint64_t> seeds{0, 1, 2, 3, 4};
  auto arm = [&](double fraction, std::vector<double>& slopes, std::vector<double>& entropy_gap) {
    ExperimentConfig config;
    config.env = "twingrid5";
    config.scheduler = ScheduleKind::constant;
    config.C = fraction;
    config.total_steps = 50000;
    const double target = constant_target(fraction, 8);
    const auto start = Clock::now();
    for (auto seed : seeds) {
      const TrainedRun run = train_config(config, seed);
      std::vector<double> x, y, h;
      for (const auto& row : run.log.rows) {
        if (row.step > 25000) {
          x.push_back(static_cast<double>(row.step));
          y.push_back(row.log_alpha);
        }
        if (row.step > 40000) h.push_back(row.policy_entropy);
      }
      slopes.push_back(slope(x, y));
      entropy_gap.push_back(std::abs(std::accumulate(h.begin(), h.end(), 0.0) / h.size() - target));
    }
    return seconds_since(start);
  };
  std::vector<double> low_slope, low_gap, mid_slope, mid_gap;
  const double t_low = arm(0.01, low_slope, low_gap);
  const double t_mid = arm(0.5, mid_slope, mid_gap);
  int low_ok = 0, mid_ok = 0;
  std::string detail;
  for (std::size_t i = 0; i < seeds.size(); ++i) {
    if (low_slope[i] < -1e-5) ++low_ok;
    if (mid_gap[i] <= 0.1 && std::abs(mid_slope[i]) * 10.0 <= std::abs(low_slope[i])) ++mid_ok;
    detail += " [seed " + std::to_string(seeds[i]) + ": slope " + fmt(low_slope[i]) + " vs " + fmt(mid_slope[i]) +
              ", |H-target| " + fmt(mid_gap[i]) + "]";
  }
  report(3, low_ok >= 4 && mid_ok >= 4 && t_low <= 600.0 && t_mid <= 600.0,
         "twin-action gridworld: 0.01 arm falling in " + std::to_string(low_ok) + "/5, 0.5 arm settled in " +
             std::to_string(mid_ok) + "/5 (arm times " + fmt(t_low) + " s, " + fmt(t_mid) + " s)" + detail);
}

std::vector<double> gridworld_default_finals;  // std_threshold 0.05 arm, reused by criterion 7

void learning_sanity() {
  std::string detail;
  bool ok = true;
  for (const char* env_name : {"chain10", "gridworld5"}) {
    ExperimentConfig config;
    config.env = env_name;
    config.total_steps = 30000;
    const double optimum = optimal_return(make_env(env_name), config.agent_config.gamma);
    int reached = 0;
    for (std::uint64_t seed = 0; seed < 5; ++seed) {
      TrainedRun run = train_config(config, seed);
      tes_logs.emplace_back(std::string(env_name) + " seed " + std::to_string(seed), run.log);
      const double ret = evaluate_policy(*run.agent, make_env(env_name), 1, config.agent_config.gamma, seed);
      if (ret >= 0.9 * optimum) ++reached;
      if (std::string(env_name) == "gridworld5") gridworld_default_finals.push_back(run.log.rows.back().episode_return_mean);
    }
    ok = ok && reached >= 3;
    detail += std::string(" ") + env_name + " " + std::to_string(reached) + "/5 (optimum " + fmt(optimum) + ")";
  }
  report(4, ok, "SAC-TES within 30k steps reaching 90% of the optimal discounted return:" + detail);
}

void tes_monotonicity() {
  int checked = 0;
  std::string bad;
  for (const auto& [name, log] : tes_logs) {
    const auto target = column(log, "target_entropy");
    for (std::size_t i = 1; i < target.size(); ++i) {
      if (target[i] > target[i - 1]) bad = name + " rises at row " + std::to_string(i);
      if (target[i] < target[i - 1]) {
        // a row may span several drops; each must be an exact factor of k
        double t = target[i - 1];
        while (t > target[i] + 1e-12) t *= 0.9;
        if (std::abs(t - target[i]) > 1e-12) bad = name + " non-k drop at row " + std::to_string(i);
      }
    }
    for (std::size_t i = 1; i < log.target_trace.size(); ++i) {
      const double prev = log.target_trace[i - 1], cur = log.target_trace[i];
      if (cur != prev && std::abs(cur - prev * 0.9) > 1e-12) bad = name + " non-k step in trace at " + std::to_string(i);
    }
    ++checked;
  }
  report(5, bad.empty() && checked > 0,
         std::to_string(checked) + " TES runs, target column non-increasing in multiples of k" +
             (bad.empty() ? "" : ": " + bad));
}

void instability_contrast() {
  int sql_larger = 0;
  bool sac_instant_zero = true;
  std::string detail;
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    double shift[2] = {0.0, 0.0};
    for (int k = 0; k < 2; ++k) {
      ExperimentConfig config;
      config.env = "gridworld5";
      config.agent = k == 0 ? AgentKind::sac : AgentKind::sql;
      config.total_steps = 5000;
      TrainedRun run = train_config(config, seed);
      Agent& agent = *run.agent;

      // Fill a replay buffer from the trained policy and draw probes and a batch from it.
      TabularEnv env = make_env(config.env);
      ReplayBuffer<double> buffer(5000, env.spec().observation_dim, env.spec().action_count, seed + 77);
      Eigen::VectorXd obs = env.reset(seed);
      for (int t = 0; t < 2000; ++t) {
        const int a = agent.act(obs, ActMode::sample);
        StepResult res = env.step(a);
        buffer.push({obs, a, res.reward, res.next_observation, res.done});
        obs = (res.done || res.truncated) ? env.reset() : res.next_observation;
      }
      const Eigen::MatrixXd probes = buffer.sample_batch(100).states;
      const BatchD batch = buffer.sample_batch(config.agent_config.batch_size);

      const Eigen::MatrixXd before = agent.policy_probs(probes);
      agent.controller().force_target(agent.controller().current() * 0.5);
      const double instant = 0.5 * (agent.policy_probs(probes) - before).cwiseAbs().sum() / 100.0;
      if (k == 0 && instant != 0.0) sac_instant_zero = false;
      agent.update(batch);
      shift[k] = 0.5 * (agent.policy_probs(probes) - before).cwiseAbs().sum() / 100.0;
    }
    if (shift[1] > shift[0]) ++sql_larger;
    detail += " [seed " + std::to_string(seed) + ": sac " + fmt(shift[0]) + ", sql " + fmt(shift[1]) + "]";
  }
  report(6, sql_larger >= 4 && sac_instant_zero,
         "policy shift one step after a forced drop larger for SQL in " + std::to_string(sql_larger) +
             "/5 seeds, SAC instantaneous shift " + (sac_instant_zero ? "0" : "NONZERO") + detail);
}

void std_threshold_robustness() {
  std::vector<std::vector<double>> finals;
  std::string detail;
  for (double sigma : {0.03, 0.05, 0.07}) {
    if (sigma == 0.05 && gridworld_default_finals.size() == 5) {
      finals.push_back(gridworld_default_finals);
    } else {
      ExperimentConfig config;
      config.env = "gridworld5";
      config.total_steps = 30000;
      config.std_threshold = sigma;
      std::vector<double> f;
      for (std::uint64_t seed = 0; seed < 5; ++seed) {
        TrainedRun run = train_config(config, seed);
        f.push_back(run.log.rows.back().episode_return_mean);
      }
      finals.push_back(f);
    }
  }
  std::vector<double> means;
  double pooled_var = 0.0;
  for (const auto& f : finals) {
    const double m = std::accumulate(f.begin(), f.end(), 0.0) / f.size();
    double ss = 0.0;
    for (double v : f) ss += (v - m) * (v - m);
    pooled_var += ss / (f.size() - 1) / finals.size();
    means.push_back(m);
    detail += " " + fmt(m);
  }
  const double spread = *std::max_element(means.begin(), means.end()) - *std::min_element(means.begin(), means.end());
  const double pooled = std::sqrt(pooled_var);
  report(7, spread <= pooled,
         "gridworld final return means at std thresholds 0.03/0.05/0.07:" + detail + "; spread " + fmt(spread) +
             " vs pooled seed std " + fmt(pooled));
}

void normalize_formula() {
  bool ok = normalize_score(20.0, 10.0, 20.0) == 1.0 && normalize_score(10.0, 10.0, 20.0) == 0.0 &&
            normalize_score(25.0, 10.0, 20.0) == 1.5 && normalize_score(0.3, 0.0, 1.0) == 0.3;
  try {
    normalize_score(1.0, 2.0, 2.0);
    ok = false;
  } catch (const DegenerateRangeError&) {
  }
  report(8, ok, "normalized score endpoints 0/1, out-of-range 1.5, identity and degenerate range");
}

void determinism() {
  const fs::path root = fs::temp_directory_path() / "tessac_acceptance";
  fs::remove_all(root);
  bool identical = true;
  int compared = 0;
  for (const char* agent : {"sac", "sql"}) {
    ExperimentConfig config;
    config.env = "gridworld5";
    set_config_value(config, "experiment.agent", agent);
    config.seeds = {0, 1};
    config.total_steps = 3000;
    for (const char* sub : {"a", "b"}) {
      config.output_dir = (root / agent / sub).string();
      run_experiment(config, std::string(sub) == "a" ? 2 : 1);
    }
    for (const auto& entry : fs::directory_iterator(root / agent / "a")) {
      if (entry.path().extension() != ".csv") continue;  // the manifest records the output directory
      std::ifstream x(entry.path(), std::ios::binary), y(root / agent / "b" / entry.path().filename(), std::ios::binary);
      std::stringstream sx, sy;
      sx << x.rdbuf();
      sy << y.rdbuf();
      if (sx.str() != sy.str() || sx.str().empty()) identical = false;
      ++compared;
    }
  }
  fs::remove_all(root);
  report(9, identical && compared > 0,
         std::to_string(compared) + " run CSVs compared byte for byte across reruns: " +
             (identical ? "identical" : "DIFFER"));
}

}  // namespace

int main() {
  const auto start = Clock::now();
  const std::vector<std::pair<int, std::function<void()>>> criteria{
      {1, gradient_suite},   {2, scheduler_oracle},     {3, alpha_dynamics},
      {4, learning_sanity},  {5, tes_monotonicity},     {6, instability_contrast},
      {7, std_threshold_robustness}, {8, normalize_formula}, {9, determinism}};
  for (const auto& [id, run] : criteria) {
    try {
      run();
    } catch (const std::exception& e) {
      report(id, false, std::string("error: ") + e.what());
    }
  }
  std::printf("acceptance finished in %.0f s, %d failing\n", seconds_since(start), failures);
  return failures == 0 ? 0 : 1;
}
