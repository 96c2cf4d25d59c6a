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

#include "tessac/run_log.hpp"

#include <charconv>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "tessac/config.hpp"

namespace tessac {

const std::vector<std::string>& run_log_columns() {
  static const std::vector<std::string> columns{
      "step",      "episode_return_mean", "policy_entropy", "log_alpha",      "target_entropy",
      "q_loss",    "pi_loss",             "alpha_loss",     "policy_shift_tv"};
  return columns;
}

std::string run_log_to_csv(const RunLog& log) {
  std::string out;
  for (std::size_t i = 0; i < run_log_columns().size(); ++i) {
    out += (i ? "," : "") + run_log_columns()[i];
  }
  out += "\n";
  for (const auto& r : log.rows) {
    out += std::to_string(r.step);
    for (double v : {r.episode_return_mean, r.policy_entropy, r.log_alpha, r.target_entropy, r.q_loss,
                     r.pi_loss, r.alpha_loss, r.policy_shift_tv}) {
      out += ",";
      out += format_double(v);
    }
    out += "\n";
  }
  return out;
}

RunLog run_log_from_csv(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  if (!std::getline(in, line)) throw std::runtime_error("run log: empty CSV");
  std::string expected;
  for (std::size_t i = 0; i < run_log_columns().size(); ++i) {
    expected += (i ? "," : "") + run_log_columns()[i];
  }
  if (line != expected) throw std::runtime_error("run log: unexpected header '" + line + "'");

  RunLog log;
  int line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    std::vector<double> values;
    std::int64_t step = 0;
    std::size_t start = 0;
    for (std::size_t field = 0; start <= line.size(); ++field) {
      const auto end = std::min(line.find(',', start), line.size());
      const char* first = line.data() + start;
      const char* last = line.data() + end;
      std::from_chars_result res{};
      if (field == 0) {
        res = std::from_chars(first, last, step);
      } else {
        double v = 0.0;
        res = std::from_chars(first, last, v);
        values.push_back(v);
      }
      if (res.ec != std::errc() || res.ptr != last) {
        throw std::runtime_error("run log line " + std::to_string(line_no) + ": bad field " +
                                 std::to_string(field + 1));
      }
      start = end + 1;
    }
    if (values.size() != run_log_columns().size() - 1) {
      throw std::runtime_error("run log line " + std::to_string(line_no) + ": wrong field count");
    }
    log.rows.push_back({step, values[0], values[1], values[2], values[3], values[4], values[5], values[6],
                        values[7]});
  }
  return log;
}

void write_run_log(const RunLog& log, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error(path + ": cannot open for writing");
  out << run_log_to_csv(log);
}

RunLog read_run_log(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error(path + ": cannot open");
  std::stringstream ss;
  ss << in.rdbuf();
  return run_log_from_csv(ss.str());
}

std::vector<double> column(const RunLog& log, std::string_view name) {
  double RunLogRow::*member = nullptr;
  if (name == "episode_return_mean") member = &RunLogRow::episode_return_mean;
  else if (name == "policy_entropy") member = &RunLogRow::policy_entropy;
  else if (name == "log_alpha") member = &RunLogRow::log_alpha;
  else if (name == "target_entropy") member = &RunLogRow::target_entropy;
  else if (name == "q_loss") member = &RunLogRow::q_loss;
  else if (name == "pi_loss") member = &RunLogRow::pi_loss;
  else if (name == "alpha_loss") member = &RunLogRow::alpha_loss;
  else if (name == "policy_shift_tv") member = &RunLogRow::policy_shift_tv;
  std::vector<double> out;
  out.reserve(log.rows.size());
  if (name == "step") {
    for (const auto& r : log.rows) out.push_back(static_cast<double>(r.step));
    return out;
  }
  if (member == nullptr) throw std::invalid_argument("unknown run log column '" + std::string(name) + "'");
  for (const auto& r : log.rows) out.push_back(r.*member);
  return out;
}

}  // namespace tessac
