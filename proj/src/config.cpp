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

#include "tessac/config.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

#include "tessac/envs.hpp"

namespace tessac {
namespace {

std::string trim(const std::string& s) {
  const auto first = s.find_first_not_of(" \t\r\n");
  if (first == std::string::npos) return {};
  const auto last = s.find_last_not_of(" \t\r\n");
  return s.substr(first, last - first + 1);
}

[[noreturn]] void bad_value(const std::string& key, const std::string& expected, const std::string& got) {
  throw ConfigError(key + ": expected " + expected + ", got '" + got + "'");
}

double parse_double(const std::string& key, const std::string& text) {
  const std::string s = trim(text);
  double value = 0.0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
  if (ec != std::errc() || ptr != s.data() + s.size() || !std::isfinite(value)) {
    bad_value(key, "a finite number", text);
  }
  return value;
}

template <typename Int>
Int parse_int(const std::string& key, const std::string& text) {
  const std::string s = trim(text);
  Int value{};
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
  if (ec != std::errc() || ptr != s.data() + s.size()) bad_value(key, "an integer", text);
  return value;
}

bool parse_bool(const std::string& key, const std::string& text) {
  const std::string s = trim(text);
  if (s == "true" || s == "1") return true;
  if (s == "false" || s == "0") return false;
  bad_value(key, "true or false", text);
}

std::vector<std::string> split_list(const std::string& text) {
  std::vector<std::string> items;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    if (!item.empty()) items.push_back(item);
  }
  return items;
}

template <typename T, typename F>
std::vector<T> parse_list(const std::string& text, F&& parse_one) {
  std::vector<T> out;
  for (const auto& item : split_list(text)) out.push_back(parse_one(item));
  return out;
}

template <typename T, typename F>
std::string join(const std::vector<T>& items, F&& format_one) {
  std::string out;
  for (std::size_t i = 0; i < items.size(); ++i) {
    if (i > 0) out += ",";
    out += format_one(items[i]);
  }
  return out;
}

using Setter = void (*)(ExperimentConfig&, const std::string&, const std::string&);

const std::map<std::string, Setter>& setters() {
  static const std::map<std::string, Setter> table{
      {"experiment.env", [](ExperimentConfig& c, const std::string&, const std::string& v) { c.env = trim(v); }},
      {"experiment.agent",
       [](ExperimentConfig& c, const std::string& k, const std::string& v) {
         try {
           c.agent = parse_agent_kind(trim(v));
         } catch (const std::invalid_argument& e) {
           throw ConfigError(k + ": " + e.what());
         }
       }},
      {"experiment.seeds",
       [](ExperimentConfig& c, const std::string& k, const std::string& v) {
         c.seeds = parse_list<std::uint64_t>(v, [&](const std::string& s) { return parse_int<std::uint64_t>(k, s); });
       }},
      {"experiment.total_steps",
       [](ExperimentConfig& c, const std::string& k, const std::string& v) { c.total_steps = parse_int<std::int64_t>(k, v); }},
      {"experiment.eval_interval",
       [](ExperimentConfig& c, const std::string& k, const std::string& v) { c.eval_interval = parse_int<std::int64_t>(k, v); }},
      {"experiment.eval_episodes",
       [](ExperimentConfig& c, const std::string& k, const std::string& v) { c.eval_episodes = parse_int<int>(k, v); }},
      {"experiment.output_dir",
       [](ExperimentConfig& c, const std::string&, const std::string& v) { c.output_dir = trim(v); }},
      {"agent.hidden",
       [](ExperimentConfig& c, const std::string& k, const std::string& v) {
         c.agent_config.hidden = parse_list<int>(v, [&](const std::string& s) { return parse_int<int>(k, s); });
       }},
      {"agent.learning_rate",
       [](ExperimentConfig& c, const std::string& k, const std::string& v) { c.agent_config.learning_rate = parse_double(k, v); }},
      {"agent.gamma",
       [](ExperimentConfig& c, const std::string& k, const std::string& v) { c.agent_config.gamma = parse_double(k, v); }},
      {"agent.tau",
       [](ExperimentConfig& c, const std::string& k, const std::string& v) { c.agent_config.tau = parse_double(k, v); }},
      {"agent.batch_size",
       [](ExperimentConfig& c, const std::string& k, const std::string& v) { c.agent_config.batch_size = parse_int<std::size_t>(k, v); }},
      {"agent.buffer_capacity",
       [](ExperimentConfig& c, const std::string& k, const std::string& v) { c.agent_config.buffer_capacity = parse_int<std::size_t>(k, v); }},
      {"agent.warmup",
       [](ExperimentConfig& c, const std::string& k, const std::string& v) { c.agent_config.warmup = parse_int<std::size_t>(k, v); }},
      {"agent.twin_critic",
       [](ExperimentConfig& c, const std::string& k, const std::string& v) { c.agent_config.twin_critic = parse_bool(k, v); }},
      {"agent.initial_log_alpha",
       [](ExperimentConfig& c, const std::string& k, const std::string& v) { c.agent_config.initial_log_alpha = parse_double(k, v); }},
      {"scheduler.scheduler",
       [](ExperimentConfig& c, const std::string& k, const std::string& v) {
         try {
           c.scheduler = parse_schedule_kind(trim(v));
         } catch (const std::invalid_argument& e) {
           throw ConfigError(k + ": " + e.what());
         }
       }},
      {"scheduler.C", [](ExperimentConfig& c, const std::string& k, const std::string& v) { c.C = parse_double(k, v); }},
      {"scheduler.lambda", [](ExperimentConfig& c, const std::string& k, const std::string& v) { c.lambda = parse_double(k, v); }},
      {"scheduler.avg_threshold",
       [](ExperimentConfig& c, const std::string& k, const std::string& v) { c.avg_threshold = parse_double(k, v); }},
      {"scheduler.std_threshold",
       [](ExperimentConfig& c, const std::string& k, const std::string& v) { c.std_threshold = parse_double(k, v); }},
      {"scheduler.k", [](ExperimentConfig& c, const std::string& k, const std::string& v) { c.k = parse_double(k, v); }},
      {"scheduler.T", [](ExperimentConfig& c, const std::string& k, const std::string& v) { c.T = parse_int<int>(k, v); }},
      {"scheduler.consecutive",
       [](ExperimentConfig& c, const std::string& k, const std::string& v) { c.consecutive = parse_bool(k, v); }},
      {"scheduler.levels",
       [](ExperimentConfig& c, const std::string& k, const std::string& v) {
         c.levels = parse_list<double>(v, [&](const std::string& s) { return parse_double(k, s); });
       }},
      {"scheduler.drop_steps",
       [](ExperimentConfig& c, const std::string& k, const std::string& v) {
         c.drop_steps = parse_list<std::int64_t>(v, [&](const std::string& s) { return parse_int<std::int64_t>(k, s); });
       }},
  };
  return table;
}

}  // namespace

std::string format_double(double value) {
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), value);
  if (ec != std::errc()) throw std::runtime_error("format_double: conversion failed");
  return {buf, ptr};
}

void ExperimentConfig::validate() const {
  try {
    (void)make_env(env);
  } catch (const std::invalid_argument& e) {
    throw ConfigError(std::string("experiment.env: ") + e.what());
  }
  if (seeds.empty()) throw ConfigError("experiment.seeds: at least one seed required");
  if (total_steps <= 0) throw ConfigError("experiment.total_steps: must be positive");
  if (eval_interval <= 0) throw ConfigError("experiment.eval_interval: must be positive");
  if (eval_episodes <= 0) throw ConfigError("experiment.eval_episodes: must be positive");
  if (agent_config.hidden.empty()) throw ConfigError("agent.hidden: at least one hidden layer required");
  for (int h : agent_config.hidden) {
    if (h <= 0) throw ConfigError("agent.hidden: widths must be positive");
  }
  if (!(agent_config.learning_rate > 0.0)) throw ConfigError("agent.learning_rate: must be positive");
  if (!(agent_config.gamma >= 0.0 && agent_config.gamma <= 1.0)) throw ConfigError("agent.gamma: must be in [0,1]");
  if (!(agent_config.tau > 0.0 && agent_config.tau <= 1.0)) throw ConfigError("agent.tau: must be in (0,1]");
  if (agent_config.batch_size == 0) throw ConfigError("agent.batch_size: must be positive");
  if (agent_config.buffer_capacity == 0) throw ConfigError("agent.buffer_capacity: must be positive");
  if (!(C > 0.0 && C <= 1.0)) throw ConfigError("scheduler.C: must be in (0,1]");
  try {
    SchedulerConfig{lambda, avg_threshold, std_threshold, k, T, 0.0, consecutive}.validate();
    if (scheduler == ScheduleKind::fixed) (void)make_controller(2);
  } catch (const std::invalid_argument& e) {
    throw ConfigError(std::string("scheduler: ") + e.what());
  }
}

TargetEntropyController ExperimentConfig::make_controller(int action_count) const {
  switch (scheduler) {
    case ScheduleKind::constant:
      return TargetEntropyController::constant(constant_target(C, action_count));
    case ScheduleKind::fixed: {
      const auto& fractions = levels.empty() ? default_fixed_fractions() : levels;
      FixedStepSchedule schedule;
      if (drop_steps.empty()) {
        schedule = FixedStepSchedule::evenly_spaced(fractions, action_count, total_steps);
      } else {
        for (double f : fractions) schedule.levels.push_back(constant_target(f, action_count));
        schedule.drop_steps = drop_steps;
      }
      return TargetEntropyController::fixed(std::move(schedule));
    }
    case ScheduleKind::tes:
      return TargetEntropyController::tes(
          {lambda, avg_threshold, std_threshold, k, T, constant_target(C, action_count), consecutive});
  }
  throw std::logic_error("unreachable schedule kind");
}

std::string ExperimentConfig::label() const {
  std::string sched = to_string(scheduler);
  if (scheduler == ScheduleKind::constant) sched += "-" + format_double(C);
  return env + "_" + to_string(agent) + "_" + sched;
}

bool operator==(const ExperimentConfig& a, const ExperimentConfig& b) {
  const auto& x = a.agent_config;
  const auto& y = b.agent_config;
  return a.env == b.env && a.agent == b.agent && a.seeds == b.seeds && a.total_steps == b.total_steps &&
         a.eval_interval == b.eval_interval && a.eval_episodes == b.eval_episodes &&
         a.output_dir == b.output_dir && x.hidden == y.hidden && x.learning_rate == y.learning_rate &&
         x.gamma == y.gamma && x.tau == y.tau && x.batch_size == y.batch_size &&
         x.buffer_capacity == y.buffer_capacity && x.warmup == y.warmup && x.twin_critic == y.twin_critic &&
         x.initial_log_alpha == y.initial_log_alpha && a.scheduler == b.scheduler && a.C == b.C &&
         a.lambda == b.lambda && a.avg_threshold == b.avg_threshold && a.std_threshold == b.std_threshold &&
         a.k == b.k && a.T == b.T && a.consecutive == b.consecutive && a.levels == b.levels &&
         a.drop_steps == b.drop_steps;
}

void apply_large_preset(ExperimentConfig& config) {
  config.agent_config.hidden = {512, 512};
  config.agent_config.batch_size = 256;
  config.agent_config.buffer_capacity = 100'000;
  config.agent_config.learning_rate = 3e-4;
  config.agent_config.gamma = 0.99;
  config.agent_config.tau = 0.005;
  config.lambda = 0.999;
  config.avg_threshold = 0.01;
  config.std_threshold = 0.05;
  config.k = 0.9;
}

void set_config_value(ExperimentConfig& config, const std::string& key_path, const std::string& value) {
  const auto it = setters().find(key_path);
  if (it == setters().end()) throw ConfigError(key_path + ": unknown key");
  it->second(config, key_path, value);
}

ExperimentConfig parse_config(const std::string& text) {
  boost::property_tree::ptree tree;
  std::istringstream in(text);
  try {
    boost::property_tree::read_ini(in, tree);
  } catch (const boost::property_tree::ini_parser_error& e) {
    throw ConfigError("config line " + std::to_string(e.line()) + ": " + e.message());
  }
  ExperimentConfig config;
  for (const auto& [section, entries] : tree) {
    if (entries.empty()) {
      if (!entries.data().empty()) throw ConfigError(section + ": key outside of any section");
      continue;
    }
    for (const auto& [key, value] : entries) {
      set_config_value(config, section + "." + key, value.data());
    }
  }
  config.validate();
  return config;
}

ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError(path + ": cannot open config file");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str());
}

std::string serialize_config(const ExperimentConfig& c) {
  const auto& a = c.agent_config;
  const auto as_int = [](auto v) { return std::to_string(v); };
  const auto as_bool = [](bool v) { return std::string(v ? "true" : "false"); };
  std::ostringstream out;
  out << "[experiment]\n"
      << "env = " << c.env << "\n"
      << "agent = " << to_string(c.agent) << "\n"
      << "seeds = " << join(c.seeds, as_int) << "\n"
      << "total_steps = " << c.total_steps << "\n"
      << "eval_interval = " << c.eval_interval << "\n"
      << "eval_episodes = " << c.eval_episodes << "\n"
      << "output_dir = " << c.output_dir << "\n"
      << "\n[agent]\n"
      << "hidden = " << join(a.hidden, as_int) << "\n"
      << "learning_rate = " << format_double(a.learning_rate) << "\n"
      << "gamma = " << format_double(a.gamma) << "\n"
      << "tau = " << format_double(a.tau) << "\n"
      << "batch_size = " << a.batch_size << "\n"
      << "buffer_capacity = " << a.buffer_capacity << "\n"
      << "warmup = " << a.warmup << "\n"
      << "twin_critic = " << as_bool(a.twin_critic) << "\n"
      << "initial_log_alpha = " << format_double(a.initial_log_alpha) << "\n"
      << "\n[scheduler]\n"
      << "scheduler = " << to_string(c.scheduler) << "\n"
      << "C = " << format_double(c.C) << "\n"
      << "lambda = " << format_double(c.lambda) << "\n"
      << "avg_threshold = " << format_double(c.avg_threshold) << "\n"
      << "std_threshold = " << format_double(c.std_threshold) << "\n"
      << "k = " << format_double(c.k) << "\n"
      << "T = " << c.T << "\n"
      << "consecutive = " << as_bool(c.consecutive) << "\n"
      << "levels = " << join(c.levels, format_double) << "\n"
      << "drop_steps = " << join(c.drop_steps, as_int) << "\n";
  return out.str();
}

}  // namespace tessac
