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

#include <string>
#include <string_view>
#include <vector>

#include "tessac/agents.hpp"

namespace tessac {

/// Runs drawn as one seed-mean line with a min-max band.
struct PlotSeries {
  std::string label;
  std::vector<RunLog> runs;
};

/// Self-contained SVG line chart of one run-log column.
std::string plot_svg(const std::vector<PlotSeries>& series, std::string_view quantity);

void plot(const std::vector<PlotSeries>& series, std::string_view quantity, const std::string& output);

/// Load CSVs and group them by file name with the `_seed<N>` suffix removed.
std::vector<PlotSeries> load_plot_series(const std::vector<std::string>& csv_paths);

}  // namespace tessac
