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
#include <random>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

namespace tessac {

struct EnvSpec {
  int observation_dim = 1;
  int action_count = 2;
  int max_episode_steps = 1;
  std::string name;
};

struct StepResult {
  Eigen::VectorXd next_observation;
  double reward = 0.0;
  bool done = false;       // terminal state reached; bootstrapping stops
  bool truncated = false;  // time limit hit; the next state still bootstraps
};

/// One branch of p(s', r | s, a).
struct Outcome {
  double probability = 1.0;
  int next_state = 0;
  double reward = 0.0;
  bool done = false;
};

/**
 * Finite MDP given by an explicit transition table, observed through one-hot
 * state encodings. Stochastic rows draw from a private generator seeded by reset().
 */
class TabularEnv {
 public:
  using Table = std::vector<std::vector<std::vector<Outcome>>>;  // [state][action] -> outcomes

  TabularEnv(EnvSpec spec, int start_state, Table table);

  const EnvSpec& spec() const { return spec_; }
  int num_states() const { return static_cast<int>(table_.size()); }
  int start_state() const { return start_state_; }
  int state() const { return state_; }
  int elapsed_steps() const { return elapsed_; }

  const std::vector<Outcome>& outcomes(int state, int action) const;
  Eigen::VectorXd observe(int state) const;

  Eigen::VectorXd reset(std::uint64_t seed);
  /// Restart an episode without reseeding the generator.
  Eigen::VectorXd reset();
  StepResult step(int action);

 private:
  EnvSpec spec_;
  int start_state_;
  Table table_;
  int state_;
  int elapsed_ = 0;
  bool finished_ = false;
  std::mt19937_64 rng_;
};

/// size x size grid, start top-left, goal bottom-right; actions up/down/left/right.
TabularEnv make_gridworld(int size = 5, double step_reward = -0.01, double goal_reward = 1.0,
                          int max_episode_steps = 100);

/// Gridworld where actions 2k and 2k+1 both perform move k.
TabularEnv make_twin_gridworld(int size = 5, double step_reward = -0.01, double goal_reward = 1.0,
                               int max_episode_steps = 100);

/// n states in a row, start at 0; action 1 moves right, action 0 moves left.
/// Moving right from state n-2 enters the goal state n-1 and ends the episode.
TabularEnv make_chain(int n = 10, double step_reward = 0.0, double goal_reward = 1.0,
                      int max_episode_steps = 100);

/// `gridworld5`, `chain10` or `twingrid5`.
TabularEnv make_env(std::string_view name);
const std::vector<std::string>& env_names();

/// Optimal discounted return from the start state, by value iteration.
double optimal_return(const TabularEnv& env, double gamma);

/// Optimal state values for every state (terminal-entry states bootstrap nothing).
Eigen::VectorXd optimal_values(const TabularEnv& env, double gamma, double tolerance = 1e-12);

}  // namespace tessac
