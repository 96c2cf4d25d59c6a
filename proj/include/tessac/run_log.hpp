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

/// Column order of every run CSV.
const std::vector<std::string>& run_log_columns();

std::string run_log_to_csv(const RunLog& log);
RunLog run_log_from_csv(const std::string& text);

void write_run_log(const RunLog& log, const std::string& path);
RunLog read_run_log(const std::string& path);

/// Values of one named column, in row order; throws for an unknown column.
std::vector<double> column(const RunLog& log, std::string_view name);

}  // namespace tessac
