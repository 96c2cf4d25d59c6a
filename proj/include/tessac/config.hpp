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
#include <stdexcept>
#include <string>
#include <vector>

#include "tessac/agents.hpp"
#include "tessac/scheduler.hpp"

namespace tessac {

/// Raised for malformed config files or values; the message names the key path.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct ExperimentConfig {
  // [experiment]
  std::string env = "gridworld5";
  AgentKind agent = AgentKind::sac;
  std::vector<std::uint64_t> seeds{0};
  std::int64_t total_steps = 50'000;
  std::int64_t eval_interval = 500;
  int eval_episodes = 5;
  std::string output_dir = "runs";

  // [agent]
  AgentConfig agent_config;

  // [scheduler]
  ScheduleKind scheduler = ScheduleKind::tes;
  double C = 0.98;  // constant target fraction, and the initial fraction for tes
  double lambda = 0.999;
  double avg_threshold = 0.01;
  double std_threshold = 0.05;
  double k = 0.9;
  int T = 1000;
  bool consecutive = false;
  std::vector<double> levels;               // fractions of log|A|; empty = default five levels
  std::vector<std::int64_t> drop_steps;     // empty = evenly spaced over total_steps

  void validate() const;

  /// Controller for an env with `action_count` actions.
  TargetEntropyController make_controller(int action_count) const;

  /// env_agent_scheduler, used for file names.
  std::string label() const;

  friend bool operator==(const ExperimentConfig&, const ExperimentConfig&);
};

/// Switch to 512x512 networks, batch 256 and a 1e5 buffer.
void apply_large_preset(ExperimentConfig& config);

ExperimentConfig parse_config(const std::string& text);
ExperimentConfig load_config(const std::string& path);
std::string serialize_config(const ExperimentConfig& config);

/// Apply a single `section.key = value` override (the same keys the file accepts).
void set_config_value(ExperimentConfig& config, const std::string& key_path, const std::string& value);

/// Shortest round-trip decimal form of a double.
std::string format_double(double value);

}  // namespace tessac
