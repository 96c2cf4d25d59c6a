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

#include "tessac/agents.hpp"

#include <cmath>
#include <stdexcept>

namespace tessac {
namespace {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream) {
  return splitmix64(seed ^ splitmix64(stream));
}

}  // namespace

std::string to_string(AgentKind kind) { return kind == AgentKind::sac ? "sac" : "sql"; }

AgentKind parse_agent_kind(std::string_view name) {
  if (name == "sac") return AgentKind::sac;
  if (name == "sql") return AgentKind::sql;
  throw std::invalid_argument("unknown agent '" + std::string(name) + "' (valid: sac, sql)");
}

int greedy_action(const Eigen::VectorXd& probs) {
  int best = 0;
  for (int a = 1; a < probs.size(); ++a) {
    if (probs(a) > probs(best)) best = a;
  }
  return best;
}

Agent::Agent(int observation_dim, int action_count, const AgentConfig& config,
             TargetEntropyController controller, std::uint64_t seed)
    : observation_dim_(observation_dim),
      action_count_(action_count),
      config_(config),
      temp_(config.initial_log_alpha, config.learning_rate),
      controller_(std::move(controller)),
      rng_(derive_seed(seed, 0)) {
  if (observation_dim <= 0 || action_count < 2) {
    throw std::invalid_argument("agent: need positive observation dim and at least two actions");
  }
  if (config.batch_size == 0) throw std::invalid_argument("agent: batch_size must be positive");
  if (!(config.tau > 0.0 && config.tau <= 1.0)) throw std::invalid_argument("agent: tau must be in (0,1]");
}

std::vector<int> Agent::layer_sizes() const {
  std::vector<int> sizes{observation_dim_};
  sizes.insert(sizes.end(), config_.hidden.begin(), config_.hidden.end());
  sizes.push_back(action_count_);
  return sizes;
}

PolicyDistributionD Agent::policy(const Eigen::VectorXd& observation) const {
  PolicyDistributionD dist;
  dist.probs = policy_probs(Eigen::MatrixXd(observation));
  dist.log_probs = dist.probs.array().log();
  return dist;
}

int Agent::act(const Eigen::VectorXd& observation, ActMode mode) {
  const Eigen::VectorXd probs = policy_probs(Eigen::MatrixXd(observation));
  if (mode == ActMode::greedy) return greedy_action(probs);
  std::discrete_distribution<int> draw(probs.data(), probs.data() + probs.size());
  return draw(rng_);
}

double Agent::policy_shift_tv(const Eigen::MatrixXd& probe_states, double before_alpha,
                              double after_alpha) const {
  if (probe_states.cols() == 0) throw std::invalid_argument("policy_shift_tv: no probe states");
  const Eigen::MatrixXd before = policy_probs(probe_states, before_alpha);
  const Eigen::MatrixXd after = policy_probs(probe_states, after_alpha);
  return 0.5 * (before - after).cwiseAbs().sum() / static_cast<double>(probe_states.cols());
}

double Agent::temperature_update(double grad_log_alpha) {
  temperature_step(temp_, grad_log_alpha);
  return temp_.log_alpha;
}

void Agent::polyak(MlpD& target, const MlpD& source, double tau) {
  target.params() = tau * source.params() + (1.0 - tau) * target.params();
}

// ---------------------------------------------------------------------------

SacAgent::SacAgent(int observation_dim, int action_count, const AgentConfig& config,
                   TargetEntropyController controller, std::uint64_t seed)
    : Agent(observation_dim, action_count, config, std::move(controller), seed) {
  actor_ = MlpD::random(layer_sizes(), derive_seed(seed, 1));
  actor_opt_ = AdamState<double>(actor_.params().size(), config.learning_rate);
  const int heads = config.twin_critic ? 2 : 1;
  for (int h = 0; h < heads; ++h) {
    critics_.push_back(MlpD::random(layer_sizes(), derive_seed(seed, 2 + h)));
    targets_.push_back(critics_.back());
    critic_opts_.emplace_back(critics_.back().params().size(), config.learning_rate);
  }
}

Eigen::MatrixXd SacAgent::policy_probs(const Eigen::MatrixXd& states, double /*alpha*/) const {
  return log_softmax_columns<double>(actor_.forward_batch(states)).array().exp();
}

Eigen::MatrixXd SacAgent::q_values(const Eigen::MatrixXd& states) const {
  Eigen::MatrixXd q = critics_[0].forward_batch(states);
  for (std::size_t h = 1; h < critics_.size(); ++h) q = q.cwiseMin(critics_[h].forward_batch(states));
  return q;
}

UpdateStats SacAgent::update(const BatchD& batch) {
  UpdateStats stats;
  const double alpha = this->alpha();

  // Critic: regress every head onto the shared soft Bellman target.
  Eigen::MatrixXd next_q = targets_[0].forward_batch(batch.next_states);
  for (std::size_t h = 1; h < targets_.size(); ++h) {
    next_q = next_q.cwiseMin(targets_[h].forward_batch(batch.next_states));
  }
  const Eigen::MatrixXd next_log_probs = log_softmax_columns<double>(actor_.forward_batch(batch.next_states));
  const Eigen::VectorXd targets =
      soft_bellman_targets(batch, next_q, next_log_probs, alpha, config_.gamma);
  for (std::size_t h = 0; h < critics_.size(); ++h) {
    auto [loss, grad] = critic_regression_loss_and_grad(critics_[h], batch, targets);
    adam_step(critics_[h].params(), grad, critic_opts_[h]);
    stats.q_loss += loss / static_cast<double>(critics_.size());
  }

  // Actor against the freshly updated critic.
  auto [pi_loss, pi_grad] = actor_loss_and_grad_from_q(actor_, batch.states, q_values(batch.states), alpha);
  adam_step(actor_.params(), pi_grad, actor_opt_);
  stats.pi_loss = pi_loss;

  // Temperature against the scheduled target.
  stats.entropy = mean_entropy<double>(log_softmax_columns<double>(actor_.forward_batch(batch.states)));
  stats.target_entropy = controller_.next(stats.entropy, env_step_);
  const auto [alpha_loss, alpha_grad] = temperature_loss_and_grad(stats.entropy, stats.target_entropy, temp_);
  temperature_update(alpha_grad);
  stats.alpha_loss = alpha_loss;

  for (std::size_t h = 0; h < critics_.size(); ++h) polyak(targets_[h], critics_[h], config_.tau);
  ++updates_;
  return stats;
}

// ---------------------------------------------------------------------------

SqlAgent::SqlAgent(int observation_dim, int action_count, const AgentConfig& config,
                   TargetEntropyController controller, std::uint64_t seed)
    : Agent(observation_dim, action_count, config, std::move(controller), seed) {
  critic_ = MlpD::random(layer_sizes(), derive_seed(seed, 2));
  target_ = critic_;
  critic_opt_ = AdamState<double>(critic_.params().size(), config.learning_rate);
}

Eigen::MatrixXd SqlAgent::policy_probs(const Eigen::MatrixXd& states, double alpha) const {
  if (!(alpha > 0.0)) throw std::invalid_argument("SqlAgent: temperature must be positive");
  return log_softmax_columns<double>(critic_.forward_batch(states) / alpha).array().exp();
}

Eigen::VectorXd SqlAgent::soft_bellman_targets(const BatchD& batch) const {
  const Eigen::VectorXd next_v = sql_soft_values<double>(target_.forward_batch(batch.next_states), alpha());
  return batch.rewards.array() + config_.gamma * batch.not_done.array() * next_v.array();
}

UpdateStats SqlAgent::update(const BatchD& batch) {
  UpdateStats stats;
  auto [loss, grad] = critic_regression_loss_and_grad(critic_, batch, soft_bellman_targets(batch));
  adam_step(critic_.params(), grad, critic_opt_);
  stats.q_loss = loss;

  const Eigen::MatrixXd q = critic_.forward_batch(batch.states);
  stats.entropy = mean_entropy<double>(log_softmax_columns<double>(q / alpha()));
  stats.target_entropy = controller_.next(stats.entropy, env_step_);
  const auto [alpha_loss, alpha_grad] = sql_temperature_loss_and_grad<double>(q, alpha(), stats.target_entropy);
  temperature_update(alpha_grad);
  stats.alpha_loss = alpha_loss;

  polyak(target_, critic_, config_.tau);
  ++updates_;
  return stats;
}

std::unique_ptr<Agent> make_agent(AgentKind kind, int observation_dim, int action_count,
                                  const AgentConfig& config, TargetEntropyController controller,
                                  std::uint64_t seed) {
  if (kind == AgentKind::sac) {
    return std::make_unique<SacAgent>(observation_dim, action_count, config, std::move(controller), seed);
  }
  return std::make_unique<SqlAgent>(observation_dim, action_count, config, std::move(controller), seed);
}

// ---------------------------------------------------------------------------

Eigen::MatrixXd all_observations(const TabularEnv& env) {
  Eigen::MatrixXd states(env.spec().observation_dim, env.num_states());
  for (int s = 0; s < env.num_states(); ++s) states.col(s) = env.observe(s);
  return states;
}

double evaluate_policy(Agent& agent, TabularEnv env, int episodes, double gamma, std::uint64_t seed) {
  if (episodes <= 0) throw std::invalid_argument("evaluate_policy: episodes must be positive");
  double total = 0.0;
  Eigen::VectorXd obs = env.reset(seed);
  for (int e = 0; e < episodes; ++e) {
    if (e > 0) obs = env.reset();
    double discount = 1.0;
    for (;;) {
      const StepResult res = env.step(agent.act(obs, ActMode::greedy));
      total += discount * res.reward;
      discount *= gamma;
      obs = res.next_observation;
      if (res.done || res.truncated) break;
    }
  }
  return total / episodes;
}

RunLog train(Agent& agent, TabularEnv env, const TrainOptions& options) {
  if (env.spec().observation_dim != agent.observation_dim() ||
      env.spec().action_count != agent.action_count()) {
    throw std::invalid_argument("train: env " + env.spec().name + " does not match agent dimensions");
  }
  if (options.total_steps < 0 || options.eval_interval <= 0) {
    throw std::invalid_argument("train: total_steps must be >= 0 and eval_interval > 0");
  }
  const AgentConfig& cfg = agent.config();
  ReplayBuffer<double> buffer(cfg.buffer_capacity, agent.observation_dim(), agent.action_count(),
                              derive_seed(options.seed, 10));
  const TabularEnv eval_env = env;
  const Eigen::MatrixXd probes = all_observations(env);

  RunLog log;
  Eigen::MatrixXd last_probs = agent.policy_probs(probes);
  double sum_entropy = 0.0, sum_q = 0.0, sum_pi = 0.0, sum_alpha = 0.0;
  std::int64_t updates = 0;

  auto emit = [&](std::int64_t step) {
    RunLogRow row;
    row.step = step;
    row.episode_return_mean = evaluate_policy(agent, eval_env, options.eval_episodes, 1.0,
                                              derive_seed(options.seed, 20));
    const Eigen::MatrixXd probs = agent.policy_probs(probes);
    if (updates > 0) {
      const auto n = static_cast<double>(updates);
      row.policy_entropy = sum_entropy / n;
      row.q_loss = sum_q / n;
      row.pi_loss = sum_pi / n;
      row.alpha_loss = sum_alpha / n;
    } else {
      const Eigen::ArrayXXd plogp = (probs.array() > 0.0).select(probs.array() * probs.array().log(), 0.0);
      row.policy_entropy = -plogp.sum() / static_cast<double>(probes.cols());
    }
    row.log_alpha = agent.log_alpha();
    row.target_entropy = agent.controller().current();
    row.policy_shift_tv = 0.5 * (probs - last_probs).cwiseAbs().sum() / static_cast<double>(probes.cols());
    last_probs = probs;
    sum_entropy = sum_q = sum_pi = sum_alpha = 0.0;
    updates = 0;
    log.rows.push_back(row);
  };

  emit(0);
  Eigen::VectorXd obs = env.reset(derive_seed(options.seed, 30));
  for (std::int64_t step = 1; step <= options.total_steps; ++step) {
    const int action = agent.act(obs, ActMode::sample);
    StepResult res = env.step(action);
    buffer.push({obs, action, res.reward, res.next_observation, res.done});
    obs = (res.done || res.truncated) ? env.reset() : std::move(res.next_observation);

    agent.set_env_step(step);
    if (buffer.size() >= std::max<std::size_t>(cfg.warmup, 1)) {
      const UpdateStats stats = agent.update(buffer.sample_batch(cfg.batch_size));
      sum_entropy += stats.entropy;
      sum_q += stats.q_loss;
      sum_pi += stats.pi_loss;
      sum_alpha += stats.alpha_loss;
      ++updates;
      if (options.record_trace) {
        log.entropy_trace.push_back(stats.entropy);
        log.target_trace.push_back(stats.target_entropy);
      }
    }
    if (step % options.eval_interval == 0) emit(step);
  }
  return log;
}

}  // namespace tessac
