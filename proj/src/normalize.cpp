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

#include "tessac/normalize.hpp"

#include <algorithm>
#include <cmath>

namespace tessac {

double normalize_score(double score, double worst, double best) {
  if (!(best != worst) || !std::isfinite(best - worst)) {
    throw DegenerateRangeError("normalize: best and worst baseline scores must differ");
  }
  return (score - worst) / (best - worst);
}

std::map<std::string, double> normalize(const std::map<std::string, double>& scores,
                                        const std::vector<std::string>& baselines) {
  if (baselines.size() < 2) throw std::invalid_argument("normalize: need at least two baselines");
  double worst = 0.0, best = 0.0;
  for (std::size_t i = 0; i < baselines.size(); ++i) {
    const auto it = scores.find(baselines[i]);
    if (it == scores.end()) throw std::invalid_argument("normalize: no score for baseline '" + baselines[i] + "'");
    worst = i == 0 ? it->second : std::min(worst, it->second);
    best = i == 0 ? it->second : std::max(best, it->second);
  }
  std::map<std::string, double> out;
  for (const auto& [name, score] : scores) out[name] = normalize_score(score, worst, best);
  return out;
}

}  // namespace tessac
