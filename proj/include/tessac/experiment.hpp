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
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "tessac/agents.hpp"
#include "tessac/config.hpp"

namespace tessac {

struct SeedResult {
  std::uint64_t seed = 0;
  double final_score = 0.0;
  std::vector<double> interval_scores;
  std::string csv_path;
};

/// Per-seed scores of one configuration plus their across-seed summary.
struct SweepResult {
  std::string label;
  std::vector<SeedResult> seeds;  // sorted by seed
  std::vector<std::int64_t> steps;
  std::vector<double> mean_curve;
  double mean_final = 0.0;
  std::optional<double> std_final;  // sample std; absent for a single seed
};

/// SHA-1 of "blob <size>\0<content>", as git computes object ids.
std::string git_blob_hash(std::string_view content);

/// Train one seed of `config` in memory.
RunLog run_seed(const ExperimentConfig& config, std::uint64_t seed);

/// Summarize per-seed logs; order of `logs` does not matter.
SweepResult aggregate(const std::string& label, std::vector<std::pair<std::uint64_t, RunLog>> logs);

/**
 * Train every seed (in parallel workers), write one CSV per seed into
 * config.output_dir, plus manifest.json with the resolved config and content hashes.
 */
SweepResult run_experiment(const ExperimentConfig& config, unsigned workers = 0);

enum class AblationAxis { std_threshold, schedule_type };

AblationAxis parse_ablation_axis(std::string_view name);
std::vector<std::string> default_axis_values(AblationAxis axis);

/// (name, config) for every axis value; each writes into its own subdirectory.
std::vector<std::pair<std::string, ExperimentConfig>> ablation_variants(const ExperimentConfig& config,
                                                                        AblationAxis axis,
                                                                        const std::vector<std::string>& values);

std::vector<SweepResult> run_ablation(const ExperimentConfig& config, AblationAxis axis,
                                      const std::vector<std::string>& values, unsigned workers = 0);

std::string sweep_result_to_json(const SweepResult& result);
void write_sweep_results(const std::vector<SweepResult>& results, const std::string& path);

}  // namespace tessac
