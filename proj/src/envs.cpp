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

#include "tessac/envs.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace tessac {

TabularEnv::TabularEnv(EnvSpec spec, int start_state, Table table)
    : spec_(std::move(spec)), start_state_(start_state), table_(std::move(table)), state_(start_state) {
  if (spec_.action_count < 2) throw std::invalid_argument("env needs at least two actions");
  if (spec_.max_episode_steps < 1) throw std::invalid_argument("max_episode_steps must be >= 1");
  if (spec_.observation_dim != num_states()) {
    throw std::invalid_argument("one-hot observation dim must equal the state count");
  }
  for (const auto& row : table_) {
    if (static_cast<int>(row.size()) != spec_.action_count) {
      throw std::invalid_argument("transition table row has the wrong action count");
    }
    for (const auto& outcomes : row) {
      double total = 0.0;
      for (const auto& o : outcomes) {
        if (o.next_state < 0 || o.next_state >= num_states()) {
          throw std::invalid_argument("transition leads outside the state space");
        }
        total += o.probability;
      }
      if (std::abs(total - 1.0) > 1e-12) {
        throw std::invalid_argument("transition probabilities do not sum to one");
      }
    }
  }
}

const std::vector<Outcome>& TabularEnv::outcomes(int state, int action) const {
  return table_.at(static_cast<std::size_t>(state)).at(static_cast<std::size_t>(action));
}

Eigen::VectorXd TabularEnv::observe(int state) const {
  Eigen::VectorXd obs = Eigen::VectorXd::Zero(spec_.observation_dim);
  obs(state) = 1.0;
  return obs;
}

Eigen::VectorXd TabularEnv::reset(std::uint64_t seed) {
  rng_.seed(seed);
  return reset();
}

Eigen::VectorXd TabularEnv::reset() {
  state_ = start_state_;
  elapsed_ = 0;
  finished_ = false;
  return observe(state_);
}

StepResult TabularEnv::step(int action) {
  if (action < 0 || action >= spec_.action_count) {
    throw std::out_of_range(spec_.name + ": action " + std::to_string(action) + " outside [0, " +
                            std::to_string(spec_.action_count) + ")");
  }
  if (finished_) throw std::logic_error(spec_.name + ": step called after episode end");
  const auto& branches = outcomes(state_, action);
  const Outcome* chosen = &branches.front();
  if (branches.size() > 1) {
    double u = std::uniform_real_distribution<double>(0.0, 1.0)(rng_);
    for (const auto& o : branches) {
      chosen = &o;
      if (u < o.probability) break;
      u -= o.probability;
    }
  }
  state_ = chosen->next_state;
  ++elapsed_;
  StepResult result{observe(state_), chosen->reward, chosen->done, false};
  if (!result.done && elapsed_ >= spec_.max_episode_steps) result.truncated = true;
  finished_ = result.done || result.truncated;
  return result;
}

namespace {

TabularEnv build_grid(int size, int copies, double step_reward, double goal_reward,
                      int max_episode_steps, std::string name) {
  if (size < 2) throw std::invalid_argument("gridworld size must be at least 2");
  const int states = size * size;
  const int goal = states - 1;
  constexpr int kRowDelta[4] = {-1, 1, 0, 0};
  constexpr int kColDelta[4] = {0, 0, -1, 1};
  TabularEnv::Table table(static_cast<std::size_t>(states));
  for (int s = 0; s < states; ++s) {
    const int row = s / size;
    const int col = s % size;
    for (int move = 0; move < 4; ++move) {
      const int r = std::clamp(row + kRowDelta[move], 0, size - 1);
      const int c = std::clamp(col + kColDelta[move], 0, size - 1);
      const int next = r * size + c;
      const Outcome o = next == goal ? Outcome{1.0, next, goal_reward, true}
                                     : Outcome{1.0, next, step_reward, false};
      for (int k = 0; k < copies; ++k) table[static_cast<std::size_t>(s)].push_back({o});
    }
  }
  EnvSpec spec{states, 4 * copies, max_episode_steps, std::move(name)};
  return TabularEnv(std::move(spec), 0, std::move(table));
}

}  // namespace

TabularEnv make_gridworld(int size, double step_reward, double goal_reward, int max_episode_steps) {
  return build_grid(size, 1, step_reward, goal_reward, max_episode_steps,
                    "gridworld" + std::to_string(size));
}

TabularEnv make_twin_gridworld(int size, double step_reward, double goal_reward,
                               int max_episode_steps) {
  return build_grid(size, 2, step_reward, goal_reward, max_episode_steps,
                    "twingrid" + std::to_string(size));
}

TabularEnv make_chain(int n, double step_reward, double goal_reward, int max_episode_steps) {
  if (n < 2) throw std::invalid_argument("chain needs at least two states");
  TabularEnv::Table table(static_cast<std::size_t>(n));
  for (int s = 0; s < n; ++s) {
    const int left = std::max(s - 1, 0);
    const int right = std::min(s + 1, n - 1);
    table[static_cast<std::size_t>(s)].push_back({Outcome{1.0, left, step_reward, false}});
    table[static_cast<std::size_t>(s)].push_back(
        {right == n - 1 ? Outcome{1.0, right, goal_reward, true}
                        : Outcome{1.0, right, step_reward, false}});
  }
  EnvSpec spec{n, 2, max_episode_steps, "chain" + std::to_string(n)};
  return TabularEnv(std::move(spec), 0, std::move(table));
}

const std::vector<std::string>& env_names() {
  static const std::vector<std::string> names{"gridworld5", "chain10", "twingrid5"};
  return names;
}

TabularEnv make_env(std::string_view name) {
  if (name == "gridworld5") return make_gridworld(5);
  if (name == "chain10") return make_chain(10);
  if (name == "twingrid5") return make_twin_gridworld(5);
  std::string valid;
  for (const auto& n : env_names()) valid += (valid.empty() ? "" : ", ") + n;
  throw std::invalid_argument("unknown env '" + std::string(name) + "' (valid: " + valid + ")");
}

Eigen::VectorXd optimal_values(const TabularEnv& env, double gamma, double tolerance) {
  Eigen::VectorXd v = Eigen::VectorXd::Zero(env.num_states());
  for (int iter = 0; iter < 10'000'000; ++iter) {
    double delta = 0.0;
    for (int s = 0; s < env.num_states(); ++s) {
      double best = -std::numeric_limits<double>::infinity();
      for (int a = 0; a < env.spec().action_count; ++a) {
        double q = 0.0;
        for (const auto& o : env.outcomes(s, a)) {
          q += o.probability * (o.reward + (o.done ? 0.0 : gamma * v(o.next_state)));
        }
        best = std::max(best, q);
      }
      delta = std::max(delta, std::abs(best - v(s)));
      v(s) = best;
    }
    if (delta < tolerance) return v;
  }
  throw std::runtime_error("value iteration did not converge");
}

double optimal_return(const TabularEnv& env, double gamma) {
  return optimal_values(env, gamma)(env.start_state());
}

}  // namespace tessac
