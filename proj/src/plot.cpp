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

#include "tessac/plot.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <limits>
#include <map>
#include <regex>
#include <stdexcept>

#include "tessac/run_log.hpp"

namespace tessac {
namespace {

constexpr double kWidth = 720;
constexpr double kHeight = 440;
constexpr double kLeft = 70;
constexpr double kRight = 170;
constexpr double kTop = 40;
constexpr double kBottom = 50;

constexpr const char* kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#ff7f0e",
                                    "#9467bd", "#8c564b", "#e377c2", "#17becf"};

std::string fmt(const char* pattern, double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), pattern, v);
  return buf;
}

std::string escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '&': out += "&amp;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

struct Band {
  std::vector<double> x, mean, lo, hi;
};

Band summarize(const PlotSeries& s, std::string_view quantity) {
  if (s.runs.empty()) throw std::invalid_argument("plot: series '" + s.label + "' has no runs");
  Band b;
  b.x = column(s.runs.front(), "step");
  if (b.x.empty()) throw std::invalid_argument("plot: series '" + s.label + "' has no rows");
  b.mean.assign(b.x.size(), 0.0);
  b.lo.assign(b.x.size(), std::numeric_limits<double>::infinity());
  b.hi.assign(b.x.size(), -std::numeric_limits<double>::infinity());
  for (const auto& run : s.runs) {
    if (column(run, "step") != b.x) {
      throw std::invalid_argument("plot: runs in series '" + s.label + "' do not share a step axis");
    }
    const auto values = column(run, quantity);
    for (std::size_t i = 0; i < values.size(); ++i) {
      b.mean[i] += values[i] / static_cast<double>(s.runs.size());
      b.lo[i] = std::min(b.lo[i], values[i]);
      b.hi[i] = std::max(b.hi[i], values[i]);
    }
  }
  return b;
}

}  // namespace

std::string plot_svg(const std::vector<PlotSeries>& series, std::string_view quantity) {
  if (series.empty()) throw std::invalid_argument("plot: nothing to draw");
  std::vector<Band> bands;
  for (const auto& s : series) bands.push_back(summarize(s, quantity));

  double x_min = std::numeric_limits<double>::infinity(), x_max = -x_min;
  double y_min = x_min, y_max = -x_min;
  for (const auto& b : bands) {
    x_min = std::min(x_min, b.x.front());
    x_max = std::max(x_max, b.x.back());
    y_min = std::min(y_min, *std::min_element(b.lo.begin(), b.lo.end()));
    y_max = std::max(y_max, *std::max_element(b.hi.begin(), b.hi.end()));
  }
  if (x_max == x_min) x_max = x_min + 1.0;
  if (y_max == y_min) {
    const double pad = y_min == 0.0 ? 1.0 : 0.1 * std::abs(y_min);
    y_min -= pad;
    y_max += pad;
  }
  const double plot_w = kWidth - kLeft - kRight;
  const double plot_h = kHeight - kTop - kBottom;
  const auto px = [&](double x) { return kLeft + (x - x_min) / (x_max - x_min) * plot_w; };
  const auto py = [&](double y) { return kTop + (y_max - y) / (y_max - y_min) * plot_h; };

  std::string svg;
  svg += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + fmt("%.0f", kWidth) + "\" height=\"" +
         fmt("%.0f", kHeight) + "\" font-family=\"sans-serif\" font-size=\"12\">\n";
  svg += "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  svg += "<text x=\"" + fmt("%.1f", kLeft + plot_w / 2) + "\" y=\"22\" text-anchor=\"middle\" font-size=\"14\">" +
         escape(std::string(quantity)) + "</text>\n";

  // Axes, ticks, grid.
  svg += "<g stroke=\"#333\" fill=\"none\">\n";
  svg += "<line x1=\"" + fmt("%.1f", kLeft) + "\" y1=\"" + fmt("%.1f", kTop + plot_h) + "\" x2=\"" +
         fmt("%.1f", kLeft + plot_w) + "\" y2=\"" + fmt("%.1f", kTop + plot_h) + "\"/>\n";
  svg += "<line x1=\"" + fmt("%.1f", kLeft) + "\" y1=\"" + fmt("%.1f", kTop) + "\" x2=\"" + fmt("%.1f", kLeft) +
         "\" y2=\"" + fmt("%.1f", kTop + plot_h) + "\"/>\n";
  svg += "</g>\n";
  constexpr int kTicks = 5;
  for (int t = 0; t <= kTicks; ++t) {
    const double xv = x_min + (x_max - x_min) * t / kTicks;
    const double yv = y_min + (y_max - y_min) * t / kTicks;
    svg += "<line x1=\"" + fmt("%.1f", px(xv)) + "\" y1=\"" + fmt("%.1f", kTop + plot_h) + "\" x2=\"" +
           fmt("%.1f", px(xv)) + "\" y2=\"" + fmt("%.1f", kTop + plot_h + 5) + "\" stroke=\"#333\"/>\n";
    svg += "<text x=\"" + fmt("%.1f", px(xv)) + "\" y=\"" + fmt("%.1f", kTop + plot_h + 18) +
           "\" text-anchor=\"middle\">" + fmt("%.4g", xv) + "</text>\n";
    svg += "<line x1=\"" + fmt("%.1f", kLeft) + "\" y1=\"" + fmt("%.1f", py(yv)) + "\" x2=\"" +
           fmt("%.1f", kLeft + plot_w) + "\" y2=\"" + fmt("%.1f", py(yv)) + "\" stroke=\"#ddd\"/>\n";
    svg += "<text x=\"" + fmt("%.1f", kLeft - 6) + "\" y=\"" + fmt("%.1f", py(yv) + 4) +
           "\" text-anchor=\"end\">" + fmt("%.4g", yv) + "</text>\n";
  }
  svg += "<text x=\"" + fmt("%.1f", kLeft + plot_w / 2) + "\" y=\"" + fmt("%.1f", kHeight - 10) +
         "\" text-anchor=\"middle\">step</text>\n";
  svg += "<text transform=\"translate(16," + fmt("%.1f", kTop + plot_h / 2) +
         ") rotate(-90)\" text-anchor=\"middle\">" + escape(std::string(quantity)) + "</text>\n";

  for (std::size_t s = 0; s < bands.size(); ++s) {
    const auto& b = bands[s];
    const std::string color = kPalette[s % std::size(kPalette)];
    std::string band_points, line_points;
    for (std::size_t i = 0; i < b.x.size(); ++i) {
      band_points += fmt("%.2f", px(b.x[i])) + "," + fmt("%.2f", py(b.hi[i])) + " ";
    }
    for (std::size_t i = b.x.size(); i-- > 0;) {
      band_points += fmt("%.2f", px(b.x[i])) + "," + fmt("%.2f", py(b.lo[i])) + " ";
    }
    for (std::size_t i = 0; i < b.x.size(); ++i) {
      line_points += (i ? " " : "") + fmt("%.2f", px(b.x[i])) + "," + fmt("%.2f", py(b.mean[i]));
    }
    band_points.pop_back();
    svg += "<polygon points=\"" + band_points + "\" fill=\"" + color + "\" fill-opacity=\"0.2\" stroke=\"none\"/>\n";
    svg += "<polyline points=\"" + line_points + "\" fill=\"none\" stroke=\"" + color + "\" stroke-width=\"1.5\"/>\n";

    const double ly = kTop + 10 + 18.0 * static_cast<double>(s);
    const double lx = kLeft + plot_w + 12;
    svg += "<line x1=\"" + fmt("%.1f", lx) + "\" y1=\"" + fmt("%.1f", ly) + "\" x2=\"" + fmt("%.1f", lx + 20) +
           "\" y2=\"" + fmt("%.1f", ly) + "\" stroke=\"" + color + "\" stroke-width=\"2\"/>\n";
    svg += "<text x=\"" + fmt("%.1f", lx + 26) + "\" y=\"" + fmt("%.1f", ly + 4) + "\">" +
           escape(series[s].label) + " (n=" + std::to_string(series[s].runs.size()) + ")</text>\n";
  }
  svg += "</svg>\n";
  return svg;
}

void plot(const std::vector<PlotSeries>& series, std::string_view quantity, const std::string& output) {
  const std::string svg = plot_svg(series, quantity);
  std::ofstream out(output, std::ios::binary);
  if (!out) throw std::runtime_error(output + ": cannot open for writing");
  out << svg;
}

std::vector<PlotSeries> load_plot_series(const std::vector<std::string>& csv_paths) {
  static const std::regex seed_suffix("_seed[0-9]+$");
  std::map<std::string, PlotSeries> groups;
  for (const auto& path : csv_paths) {
    const std::string label = std::regex_replace(std::filesystem::path(path).stem().string(), seed_suffix, "");
    auto& group = groups[label];
    group.label = label;
    group.runs.push_back(read_run_log(path));
  }
  std::vector<PlotSeries> out;
  for (auto& [label, group] : groups) out.push_back(std::move(group));
  return out;
}

}  // namespace tessac
