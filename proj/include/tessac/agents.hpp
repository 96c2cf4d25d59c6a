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

#pragma once

#include <cstdint>
#include <memory>
#include <random>
#include <string>
#include <string_view>
#include <vector>

#include "tessac/envs.hpp"
#include "tessac/maxent.hpp"
#include "tessac/mlp.hpp"
#include "tessac/replay.hpp"
#include "tessac/scheduler.hpp"

namespace tessac {

using PolicyDistributionD = PolicyDistribution<double>;
using BatchD = Batch<double>;

struct AgentConfig {
  std::vector<int> hidden{64, 64};
  double learning_rate = 3e-4;
  double gamma = 0.99;
  double tau = 0.005;
  std::size_t batch_size = 64;
  std::size_t buffer_capacity = 20'000;
  std::size_t warmup = 1'000;
  bool twin_critic = false;
  double initial_log_alpha = -6.907755278982137;  // log(1e-3)
};

struct UpdateStats {
  double q_loss = 0.0;
  double pi_loss = 0.0;
  double alpha_loss = 0.0;
  double entropy = 0.0;         // mini-batch policy entropy fed to the scheduler
  double target_entropy = 0.0;  // target in force for the temperature step
};

enum class ActMode { sample, greedy };
enum class AgentKind { sac, sql };

std::string to_string(AgentKind kind);
AgentKind parse_agent_kind(std::string_view name);

/// Index of the largest probability; ties go to the lowest index.
int greedy_action(const Eigen::VectorXd& probs);

/// Common surface of the SAC and SQL learners.
class Agent {
 public:
  virtual ~Agent() = default;

  virtual AgentKind kind() const = 0;

  /// Action distribution at the current temperature.
  PolicyDistributionD policy(const Eigen::VectorXd& observation) const;

  /// Action probabilities (|A| x n) for a batch of states, evaluated at temperature `alpha`.
  virtual Eigen::MatrixXd policy_probs(const Eigen::MatrixXd& states, double alpha) const = 0;
  Eigen::MatrixXd policy_probs(const Eigen::MatrixXd& states) const {
    return policy_probs(states, alpha());
  }

  /// One gradient step on every learned quantity.
  virtual UpdateStats update(const BatchD& batch) = 0;

  int act(const Eigen::VectorXd& observation, ActMode mode);

  /// Mean total-variation distance over probe states between the policy at two temperatures.
  double policy_shift_tv(const Eigen::MatrixXd& probe_states, double before_alpha,
                         double after_alpha) const;

  double log_alpha() const { return temp_.log_alpha; }
  double alpha() const { return temp_.alpha(); }
  TemperatureState<double>& temperature() { return temp_; }
  const TemperatureState<double>& temperature() const { return temp_; }

  TargetEntropyController& controller() { return controller_; }
  const TargetEntropyController& controller() const { return controller_; }

  /// Experience-step clock consumed by step-indexed schedules.
  void set_env_step(std::int64_t step) { env_step_ = step; }
  std::int64_t env_step() const { return env_step_; }
  std::int64_t update_count() const { return updates_; }

  const AgentConfig& config() const { return config_; }
  int observation_dim() const { return observation_dim_; }
  int action_count() const { return action_count_; }

 protected:
  Agent(int observation_dim, int action_count, const AgentConfig& config,
        TargetEntropyController controller, std::uint64_t seed);

  double temperature_update(double grad_log_alpha);
  static void polyak(MlpD& target, const MlpD& source, double tau);
  std::vector<int> layer_sizes() const;

  int observation_dim_;
  int action_count_;
  AgentConfig config_;
  TemperatureState<double> temp_;
  TargetEntropyController controller_;
  std::mt19937_64 rng_;
  std::int64_t env_step_ = 0;
  std::int64_t updates_ = 0;
};

/// Discrete SAC with exact expectations over actions.
class SacAgent final : public Agent {
 public:
  SacAgent(int observation_dim, int action_count, const AgentConfig& config,
           TargetEntropyController controller, std::uint64_t seed);

  AgentKind kind() const override { return AgentKind::sac; }
  Eigen::MatrixXd policy_probs(const Eigen::MatrixXd& states, double alpha) const override;
  using Agent::policy_probs;
  UpdateStats update(const BatchD& batch) override;

  const MlpD& actor() const { return actor_; }
  const MlpD& critic() const { return critics_[0]; }
  const MlpD& target_critic() const { return targets_[0]; }
  MlpD& actor() { return actor_; }
  MlpD& critic() { return critics_[0]; }
  MlpD& target_critic() { return targets_[0]; }

  /// Element-wise min over the critic ensemble (one or two heads).
  Eigen::MatrixXd q_values(const Eigen::MatrixXd& states) const;

 private:
  MlpD actor_;
  std::vector<MlpD> critics_;
  std::vector<MlpD> targets_;
  AdamState<double> actor_opt_;
  std::vector<AdamState<double>> critic_opts_;
};

/// Soft Q-learning: the policy is always softmax(Q(s, .) / alpha).
class SqlAgent final : public Agent {
 public:
  SqlAgent(int observation_dim, int action_count, const AgentConfig& config,
           TargetEntropyController controller, std::uint64_t seed);

  AgentKind kind() const override { return AgentKind::sql; }
  Eigen::MatrixXd policy_probs(const Eigen::MatrixXd& states, double alpha) const override;
  using Agent::policy_probs;
  UpdateStats update(const BatchD& batch) override;

  /// r + gamma (1 - done) alpha log sum exp(Q_target(s', .) / alpha).
  Eigen::VectorXd soft_bellman_targets(const BatchD& batch) const;

  const MlpD& critic() const { return critic_; }
  const MlpD& target_critic() const { return target_; }
  MlpD& critic() { return critic_; }
  MlpD& target_critic() { return target_; }

 private:
  MlpD critic_;
  MlpD target_;
  AdamState<double> critic_opt_;
};

std::unique_ptr<Agent> make_agent(AgentKind kind, int observation_dim, int action_count,
                                  const AgentConfig& config, TargetEntropyController controller,
                                  std::uint64_t seed);

/// One logged row; entropy and losses are means over the updates since the previous row.
struct RunLogRow {
  std::int64_t step = 0;
  double episode_return_mean = 0.0;
  double policy_entropy = 0.0;
  double log_alpha = 0.0;
  double target_entropy = 0.0;
  double q_loss = 0.0;
  double pi_loss = 0.0;
  double alpha_loss = 0.0;
  double policy_shift_tv = 0.0;

  friend bool operator==(const RunLogRow&, const RunLogRow&) = default;
};

struct RunLog {
  std::vector<RunLogRow> rows;
  // Per gradient step: scheduler input entropy and the target it returned.
  std::vector<double> entropy_trace;
  std::vector<double> target_trace;
};

struct TrainOptions {
  std::int64_t total_steps = 50'000;
  std::int64_t eval_interval = 500;
  int eval_episodes = 5;
  std::uint64_t seed = 0;
  bool record_trace = true;
};

/// Every state of a tabular env as one-hot columns.
Eigen::MatrixXd all_observations(const TabularEnv& env);

/// Greedy rollouts; returns the mean (optionally discounted) episode return.
double evaluate_policy(Agent& agent, TabularEnv env, int episodes, double gamma = 1.0,
                       std::uint64_t seed = 0);

/// One env step and, once warm, one gradient step per iteration; logs every eval_interval steps.
RunLog train(Agent& agent, TabularEnv env, const TrainOptions& options);

}  // namespace tessac
