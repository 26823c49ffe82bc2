/*
 * Copyright 2026 The cmca Authors
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

#include <cstddef>
#include <string>
#include <utility>
#include <vector>

namespace cmca {

struct ScatterPoint {
    double x = 0.0;
    double y = 0.0;
    std::string label;
};

enum class PlotKind { Rows, CategoryCoordinates, CategoryLoadings };

std::string to_string(PlotKind kind);
PlotKind parse_plot_kind(const std::string& text);

struct PlotSpec {
    PlotKind kind = PlotKind::Rows;
    std::pair<int, int> components{1, 2};  // 1-based
    std::string color_rule;                // empty: color by group
    std::size_t top_n = 9;
    std::string axis_prefix = "cPC";
    std::string title;
};

struct LegendEntry {
    std::string label;
    std::size_t count = 0;
};

/// Distinct labels in first-appearance order with their point counts.
std::vector<LegendEntry> legend_entries(const std::vector<ScatterPoint>& points);

/// Standalone SVG 1.1 scatter plot. Output depends only on the inputs.
std::string render_scatter(const std::vector<ScatterPoint>& points, const PlotSpec& spec);

} // namespace cmca
