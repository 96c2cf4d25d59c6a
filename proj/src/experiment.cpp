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

#include "tessac/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <thread>

#include <openssl/evp.h>

#include <json.hpp>

#include "tessac/envs.hpp"
#include "tessac/run_log.hpp"

namespace tessac {
namespace fs = std::filesystem;

std::string git_blob_hash(std::string_view content) {
  const std::string header = "blob " + std::to_string(content.size()) + '\0';
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int length = 0;
  EVP_MD_CTX* ctx = EVP_MD_CTX_new();
  if (ctx == nullptr) throw std::runtime_error("git_blob_hash: cannot allocate digest context");
  const bool ok = EVP_DigestInit_ex(ctx, EVP_sha1(), nullptr) == 1 &&
                  EVP_DigestUpdate(ctx, header.data(), header.size()) == 1 &&
                  EVP_DigestUpdate(ctx, content.data(), content.size()) == 1 &&
                  EVP_DigestFinal_ex(ctx, digest, &length) == 1;
  EVP_MD_CTX_free(ctx);
  if (!ok) throw std::runtime_error("git_blob_hash: digest failed");
  static constexpr char kHex[] = "0123456789abcdef";
  std::string hex;
  for (unsigned int i = 0; i < length; ++i) {
    hex += kHex[digest[i] >> 4];
    hex += kHex[digest[i] & 0xF];
  }
  return hex;
}

RunLog run_seed(const ExperimentConfig& config, std::uint64_t seed) {
  config.validate();
  TabularEnv env = make_env(config.env);
  const int actions = env.spec().action_count;
  auto agent = make_agent(config.agent, env.spec().observation_dim, actions, config.agent_config,
                          config.make_controller(actions), seed);
  TrainOptions options;
  options.total_steps = config.total_steps;
  options.eval_interval = config.eval_interval;
  options.eval_episodes = config.eval_episodes;
  options.seed = seed;
  options.record_trace = false;
  return train(*agent, std::move(env), options);
}

SweepResult aggregate(const std::string& label, std::vector<std::pair<std::uint64_t, RunLog>> logs) {
  if (logs.empty()) throw std::invalid_argument("aggregate: no runs");
  std::sort(logs.begin(), logs.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
  SweepResult result;
  result.label = label;
  for (const auto& row : logs.front().second.rows) result.steps.push_back(row.step);
  result.mean_curve.assign(result.steps.size(), 0.0);
  for (const auto& [seed, log] : logs) {
    SeedResult sr;
    sr.seed = seed;
    sr.interval_scores = column(log, "episode_return_mean");
    sr.final_score = sr.interval_scores.empty() ? 0.0 : sr.interval_scores.back();
    for (std::size_t i = 0; i < result.mean_curve.size() && i < sr.interval_scores.size(); ++i) {
      result.mean_curve[i] += sr.interval_scores[i] / static_cast<double>(logs.size());
    }
    result.mean_final += sr.final_score / static_cast<double>(logs.size());
    result.seeds.push_back(std::move(sr));
  }
  if (result.seeds.size() >= 2) {
    double ss = 0.0;
    for (const auto& sr : result.seeds) ss += (sr.final_score - result.mean_final) * (sr.final_score - result.mean_final);
    result.std_final = std::sqrt(ss / static_cast<double>(result.seeds.size() - 1));
  }
  return result;
}

SweepResult run_experiment(const ExperimentConfig& config, unsigned workers) {
  config.validate();
  const fs::path dir(config.output_dir);
  fs::create_directories(dir);

  const std::size_t n = config.seeds.size();
  std::vector<RunLog> logs(n);
  std::vector<std::exception_ptr> errors(n);
  std::atomic<std::size_t> next{0};
  const auto work = [&] {
    for (std::size_t i = next++; i < n; i = next++) {
      try {
        logs[i] = run_seed(config, config.seeds[i]);
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  if (workers == 0) workers = std::max(1u, std::thread::hardware_concurrency());
  workers = static_cast<unsigned>(std::min<std::size_t>(workers, n));
  {
    std::vector<std::jthread> pool;
    for (unsigned w = 1; w < workers; ++w) pool.emplace_back(work);
    work();
  }
  for (const auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }

  nlohmann::ordered_json manifest;
  const std::string config_text = serialize_config(config);
  manifest["label"] = config.label();
  manifest["config"] = config_text;
  manifest["config_hash"] = git_blob_hash(config_text);
  manifest["runs"] = nlohmann::ordered_json::array();

  std::vector<std::pair<std::uint64_t, RunLog>> by_seed;
  std::vector<std::string> paths(n);
  for (std::size_t i = 0; i < n; ++i) {
    const std::string csv = run_log_to_csv(logs[i]);
    const fs::path path = dir / (config.label() + "_seed" + std::to_string(config.seeds[i]) + ".csv");
    std::ofstream(path, std::ios::binary) << csv;
    paths[i] = path.string();
    manifest["runs"].push_back({{"seed", config.seeds[i]}, {"csv", path.filename().string()},
                                {"hash", git_blob_hash(csv)}});
    by_seed.emplace_back(config.seeds[i], std::move(logs[i]));
  }
  std::ofstream(dir / "manifest.json", std::ios::binary) << manifest.dump(2) << "\n";

  SweepResult result = aggregate(config.label(), std::move(by_seed));
  for (auto& sr : result.seeds) {
    const auto it = std::find(config.seeds.begin(), config.seeds.end(), sr.seed);
    sr.csv_path = paths[static_cast<std::size_t>(it - config.seeds.begin())];
  }
  return result;
}

AblationAxis parse_ablation_axis(std::string_view name) {
  if (name == "std_threshold") return AblationAxis::std_threshold;
  if (name == "schedule_type") return AblationAxis::schedule_type;
  throw ConfigError("ablation axis '" + std::string(name) + "' (valid: std_threshold, schedule_type)");
}

std::vector<std::string> default_axis_values(AblationAxis axis) {
  if (axis == AblationAxis::std_threshold) return {"0.03", "0.05", "0.07"};
  return {"tes", "fixed", "constant-0.98", "constant-0.5", "constant-0.01"};
}

std::vector<std::pair<std::string, ExperimentConfig>> ablation_variants(const ExperimentConfig& config,
                                                                        AblationAxis axis,
                                                                        const std::vector<std::string>& values) {
  if (values.empty()) throw ConfigError("ablation: axis values must not be empty");
  std::vector<std::pair<std::string, ExperimentConfig>> variants;
  for (const auto& value : values) {
    ExperimentConfig variant = config;
    std::string name;
    if (axis == AblationAxis::std_threshold) {
      set_config_value(variant, "scheduler.std_threshold", value);
      variant.scheduler = ScheduleKind::tes;
      name = "std_threshold-" + value;
    } else if (value.rfind("constant-", 0) == 0) {
      variant.scheduler = ScheduleKind::constant;
      set_config_value(variant, "scheduler.C", value.substr(9));
      name = value;
    } else {
      set_config_value(variant, "scheduler.scheduler", value);
      name = value;
    }
    variant.output_dir = (fs::path(config.output_dir) / name).string();
    variant.validate();
    variants.emplace_back(name, std::move(variant));
  }
  return variants;
}

std::vector<SweepResult> run_ablation(const ExperimentConfig& config, AblationAxis axis,
                                      const std::vector<std::string>& values, unsigned workers) {
  std::vector<SweepResult> results;
  for (auto& [name, variant] : ablation_variants(config, axis, values)) {
    results.push_back(run_experiment(variant, workers));
    results.back().label = name;
  }
  return results;
}

std::string sweep_result_to_json(const SweepResult& r) {
  nlohmann::ordered_json j;
  j["label"] = r.label;
  j["mean_final"] = r.mean_final;
  j["std_final"] = r.std_final ? nlohmann::ordered_json(*r.std_final) : nlohmann::ordered_json(nullptr);
  j["steps"] = r.steps;
  j["mean_curve"] = r.mean_curve;
  j["seeds"] = nlohmann::ordered_json::array();
  for (const auto& s : r.seeds) {
    j["seeds"].push_back({{"seed", s.seed}, {"final_score", s.final_score},
                          {"interval_scores", s.interval_scores}, {"csv", fs::path(s.csv_path).filename().string()}});
  }
  return j.dump(2);
}

void write_sweep_results(const std::vector<SweepResult>& results, const std::string& path) {
  nlohmann::ordered_json all = nlohmann::ordered_json::array();
  for (const auto& r : results) all.push_back(nlohmann::ordered_json::parse(sweep_result_to_json(r)));
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error(path + ": cannot open for writing");
  out << all.dump(2) << "\n";
}

}  // namespace tessac
