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

#include <map>
#include <stdexcept>
#include <string>
#include <vector>

namespace tessac {

class DegenerateRangeError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// (score - worst) / (best - worst).
double normalize_score(double score, double worst, double best);

/**
 * Map every variant's score with the affine transform that sends the worst
 * baseline to 0 and the best baseline to 1. Baselines are named entries of
 * `scores`; at least two with distinct scores are required.
 */
std::map<std::string, double> normalize(const std::map<std::string, double>& scores,
                                        const std::vector<std::string>& baselines);

}  // namespace tessac
