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
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace tessac {

/// Parameters of the exponential-moving-window target entropy schedule.
struct SchedulerConfig {
  double lambda = 0.999;         // EMA discount
  double avg_threshold = 0.01;   // half-width of the window around the target
  double std_threshold = 0.05;   // maximum EMA std for a window hit
  double k = 0.9;                // multiplicative drop factor
  int T = 1000;                  // window hits needed per drop
  double initial_target = 0.0;
  bool consecutive = false;      // reset the hit counter whenever the window is missed

  void validate() const;
};

struct SchedulerState {
  double target_entropy = 0.0;
  double ema_mean = 0.0;
  double ema_var = 0.0;
  int condition_counter = 0;

  static SchedulerState initial(const SchedulerConfig& config);
  double ema_std() const;
};

/// mu <- lambda mu + (1 - lambda) e;  var <- lambda (var + (1 - lambda) (e - mu_prev)^2).
void ema_update(SchedulerState& state, double entropy, double lambda);

/// One scheduler call with the current policy entropy; returns the target in force afterwards.
double tes_step(SchedulerState& state, const SchedulerConfig& config, double entropy);

/// Piecewise-constant target: levels[j] holds from drop_steps[j-1] until drop_steps[j].
struct FixedStepSchedule {
  std::vector<double> levels;
  std::vector<std::int64_t> drop_steps;

  void validate() const;

  /// Levels C log|A| for C in {0.98, 0.75, 0.5, 0.25, 0.01}, dropped evenly four times.
  static FixedStepSchedule evenly_spaced(const std::vector<double>& fractions, int action_count,
                                         std::int64_t total_steps);
};

double fixed_step_target(const FixedStepSchedule& schedule, std::int64_t step);

/// C * log|A|.
double constant_target(double fraction, int action_count);

const std::vector<double>& default_fixed_fractions();

enum class ScheduleKind { constant, fixed, tes };

std::string to_string(ScheduleKind kind);
ScheduleKind parse_schedule_kind(std::string_view name);

/// Uniform front for the three target-entropy controllers.
class TargetEntropyController {
 public:
  struct Constant {
    double target;
  };
  struct Fixed {
    FixedStepSchedule schedule;
  };
  struct Tes {
    SchedulerConfig config;
    SchedulerState state;
  };

  static TargetEntropyController constant(double target);
  static TargetEntropyController fixed(FixedStepSchedule schedule);
  static TargetEntropyController tes(const SchedulerConfig& config);

  ScheduleKind kind() const;
  double current() const { return current_; }

  /// Advance with mini-batch entropy `entropy` at experience step `step`.
  double next(double entropy, std::int64_t step);

  /// Overwrite the target in force (used to force a drop at a chosen point).
  void force_target(double target);

  const SchedulerState* tes_state() const;

 private:
  explicit TargetEntropyController(std::variant<Constant, Fixed, Tes> impl, double current)
      : impl_(std::move(impl)), current_(current) {}

  std::variant<Constant, Fixed, Tes> impl_;
  double current_;
};

}  // namespace tessac
