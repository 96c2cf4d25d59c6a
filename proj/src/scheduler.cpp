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

#include "tessac/scheduler.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace tessac {

void SchedulerConfig::validate() const {
  if (!(lambda > 0.0 && lambda < 1.0)) throw std::invalid_argument("scheduler: lambda must be in (0,1)");
  if (!(avg_threshold > 0.0)) throw std::invalid_argument("scheduler: avg_threshold must be > 0");
  if (!(std_threshold >= 0.0)) throw std::invalid_argument("scheduler: std_threshold must be >= 0");
  if (!(k > 0.0 && k < 1.0)) throw std::invalid_argument("scheduler: k must be in (0,1)");
  if (T < 1) throw std::invalid_argument("scheduler: T must be positive");
  if (!std::isfinite(initial_target)) throw std::invalid_argument("scheduler: initial target not finite");
}

SchedulerState SchedulerState::initial(const SchedulerConfig& config) {
  return {config.initial_target, config.initial_target, 0.0, 0};
}

double SchedulerState::ema_std() const { return std::sqrt(ema_var); }

void ema_update(SchedulerState& state, double entropy, double lambda) {
  const double delta = entropy - state.ema_mean;
  state.ema_mean += (1.0 - lambda) * delta;
  state.ema_var = lambda * (state.ema_var + (1.0 - lambda) * delta * delta);
}

double tes_step(SchedulerState& state, const SchedulerConfig& config, double entropy) {
  ema_update(state, entropy, config.lambda);
  const double target = state.target_entropy;
  const bool near = target - config.avg_threshold < state.ema_mean &&
                    state.ema_mean < target + config.avg_threshold;
  if (!near || state.ema_std() > config.std_threshold) {
    if (config.consecutive) state.condition_counter = 0;
    return state.target_entropy;
  }
  if (++state.condition_counter >= config.T) {
    state.condition_counter = 0;
    state.target_entropy *= config.k;
  }
  return state.target_entropy;
}

void FixedStepSchedule::validate() const {
  if (levels.size() != drop_steps.size() + 1) {
    throw std::invalid_argument("fixed schedule: need exactly one more level than drop steps");
  }
  for (std::size_t i = 1; i < levels.size(); ++i) {
    if (!(levels[i] < levels[i - 1])) throw std::invalid_argument("fixed schedule: levels must decrease");
  }
  for (std::size_t i = 1; i < drop_steps.size(); ++i) {
    if (!(drop_steps[i] > drop_steps[i - 1])) {
      throw std::invalid_argument("fixed schedule: drop steps must increase");
    }
  }
}

FixedStepSchedule FixedStepSchedule::evenly_spaced(const std::vector<double>& fractions,
                                                   int action_count, std::int64_t total_steps) {
  FixedStepSchedule schedule;
  const auto drops = static_cast<std::int64_t>(fractions.size()) - 1;
  for (std::size_t i = 0; i < fractions.size(); ++i) {
    schedule.levels.push_back(constant_target(fractions[i], action_count));
    if (i > 0) {
      schedule.drop_steps.push_back(total_steps * static_cast<std::int64_t>(i) / (drops + 1));
    }
  }
  schedule.validate();
  return schedule;
}

double fixed_step_target(const FixedStepSchedule& schedule, std::int64_t step) {
  const auto passed = std::upper_bound(schedule.drop_steps.begin(), schedule.drop_steps.end(), step) -
                      schedule.drop_steps.begin();
  return schedule.levels.at(static_cast<std::size_t>(passed));
}

double constant_target(double fraction, int action_count) {
  if (action_count < 2) throw std::invalid_argument("constant_target: need at least two actions");
  return fraction * std::log(static_cast<double>(action_count));
}

const std::vector<double>& default_fixed_fractions() {
  static const std::vector<double> fractions{0.98, 0.75, 0.5, 0.25, 0.01};
  return fractions;
}

std::string to_string(ScheduleKind kind) {
  switch (kind) {
    case ScheduleKind::constant: return "constant";
    case ScheduleKind::fixed: return "fixed";
    case ScheduleKind::tes: return "tes";
  }
  return "?";
}

ScheduleKind parse_schedule_kind(std::string_view name) {
  if (name == "constant") return ScheduleKind::constant;
  if (name == "fixed") return ScheduleKind::fixed;
  if (name == "tes") return ScheduleKind::tes;
  throw std::invalid_argument("unknown scheduler '" + std::string(name) +
                              "' (valid: constant, fixed, tes)");
}

TargetEntropyController TargetEntropyController::constant(double target) {
  return TargetEntropyController(Constant{target}, target);
}

TargetEntropyController TargetEntropyController::fixed(FixedStepSchedule schedule) {
  schedule.validate();
  const double first = fixed_step_target(schedule, 0);
  return TargetEntropyController(Fixed{std::move(schedule)}, first);
}

TargetEntropyController TargetEntropyController::tes(const SchedulerConfig& config) {
  config.validate();
  return TargetEntropyController(Tes{config, SchedulerState::initial(config)}, config.initial_target);
}

ScheduleKind TargetEntropyController::kind() const {
  return static_cast<ScheduleKind>(impl_.index());
}

double TargetEntropyController::next(double entropy, std::int64_t step) {
  if (auto* c = std::get_if<Constant>(&impl_)) {
    current_ = c->target;
  } else if (auto* f = std::get_if<Fixed>(&impl_)) {
    current_ = fixed_step_target(f->schedule, step);
  } else {
    auto& t = std::get<Tes>(impl_);
    current_ = tes_step(t.state, t.config, entropy);
  }
  return current_;
}

void TargetEntropyController::force_target(double target) {
  current_ = target;
  if (auto* c = std::get_if<Constant>(&impl_)) {
    c->target = target;
  } else if (auto* t = std::get_if<Tes>(&impl_)) {
    t->state.target_entropy = target;
    t->state.condition_counter = 0;
  } else {
    // A fixed schedule is a pure function of the step; replace it with a constant.
    impl_ = Constant{target};
  }
}

const SchedulerState* TargetEntropyController::tes_state() const {
  if (const auto* t = std::get_if<Tes>(&impl_)) return &t->state;
  return nullptr;
}

}  // namespace tessac
