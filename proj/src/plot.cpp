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
#include "cmca/plot.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>

#include "cmca/error.hpp"

namespace cmca {

namespace {

constexpr double kWidth = 720.0;
constexpr double kHeight = 540.0;
constexpr double kLeft = 70.0;
constexpr double kRight = 200.0;  // room for the legend
constexpr double kTop = 40.0;
constexpr double kBottom = 60.0;

// tab10
constexpr std::array<const char*, 10> kPalette = {"#1f77b4", "#ff7f0e", "#2ca02c", "#d62728", "#9467bd",
                                                  "#8c564b", "#e377c2", "#7f7f7f", "#bcbd22", "#17becf"};

std::string fmt(double v)
{
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.2f", v);
    std::string s = buf;
    return s == "-0.00" ? "0.00" : s;
}

std::string xml_escape(const std::string& text)
{
    std::string out;
    for (char c : text) {
        switch (c) {
        case '&': out += "&amp;"; break;
        case '<': out += "&lt;"; break;
        case '>': out += "&gt;"; break;
        case '"': out += "&quot;"; break;
        default: out.push_back(c);
        }
    }
    return out;
}

struct Axis {
    double lo = -1.0;
    double hi = 1.0;

    static Axis fit(double lo, double hi)
    {
        if (!(hi > lo)) {
            const double pad = lo == 0.0 ? 1.0 : std::abs(lo) * 0.5;
            return {lo - pad, hi + pad};
        }
        const double pad = (hi - lo) * 0.05;
        return {lo - pad, hi + pad};
    }
    double map(double v, double a, double b) const { return a + (v - lo) / (hi - lo) * (b - a); }
};

} // namespace

std::string to_string(PlotKind kind)
{
    switch (kind) {
    case PlotKind::Rows: return "rows";
    case PlotKind::CategoryCoordinates: return "category_coordinates";
    case PlotKind::CategoryLoadings: return "category_loadings";
    }
    return "rows";
}

PlotKind parse_plot_kind(const std::string& text)
{
    if (text == "rows")
        return PlotKind::Rows;
    if (text == "category_coordinates")
        return PlotKind::CategoryCoordinates;
    if (text == "category_loadings")
        return PlotKind::CategoryLoadings;
    throw Error(ErrorCode::InvalidArgument, "unknown plot kind '" + text + "'");
}

std::vector<LegendEntry> legend_entries(const std::vector<ScatterPoint>& points)
{
    std::vector<LegendEntry> out;
    for (const auto& p : points) {
        auto it = std::find_if(out.begin(), out.end(), [&](const LegendEntry& e) { return e.label == p.label; });
        if (it == out.end())
            out.push_back({p.label, 1});
        else
            ++it->count;
    }
    return out;
}

std::string render_scatter(const std::vector<ScatterPoint>& points, const PlotSpec& spec)
{
    if (points.empty())
        throw Error(ErrorCode::InvalidArgument, "scatter plot needs at least one point");
    for (const auto& p : points)
        if (!std::isfinite(p.x) || !std::isfinite(p.y))
            throw Error(ErrorCode::NonFinite, "non-finite coordinate in scatter plot");
    if (spec.components.first == spec.components.second || spec.components.first < 1 || spec.components.second < 1)
        throw Error(ErrorCode::InvalidArgument, "plot components must be distinct and >= 1");

    auto [xmin, xmax] = std::minmax_element(points.begin(), points.end(),
                                            [](const auto& a, const auto& b) { return a.x < b.x; });
    auto [ymin, ymax] = std::minmax_element(points.begin(), points.end(),
                                            [](const auto& a, const auto& b) { return a.y < b.y; });
    const Axis ax = Axis::fit(xmin->x, xmax->x);
    const Axis ay = Axis::fit(ymin->y, ymax->y);
    const double x0 = kLeft, x1 = kWidth - kRight, y0 = kHeight - kBottom, y1 = kTop;

    const auto legend = legend_entries(points);
    auto color_of = [&](const std::string& label) {
        for (std::size_t i = 0; i < legend.size(); ++i)
            if (legend[i].label == label)
                return kPalette[i % kPalette.size()];
        return kPalette[0];
    };

    std::string svg;
    svg += "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
    svg += "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"" + fmt(kWidth) + "\" height=\"" +
           fmt(kHeight) + "\" viewBox=\"0 0 " + fmt(kWidth) + " " + fmt(kHeight) + "\">\n";
    svg += "<rect x=\"0\" y=\"0\" width=\"" + fmt(kWidth) + "\" height=\"" + fmt(kHeight) + "\" fill=\"#ffffff\"/>\n";
    if (!spec.title.empty())
        svg += "<text x=\"" + fmt((x0 + x1) / 2) + "\" y=\"24\" text-anchor=\"middle\" font-family=\"sans-serif\" "
               "font-size=\"15\">" + xml_escape(spec.title) + "</text>\n";

    svg += "<g id=\"axes\" stroke=\"#444444\" stroke-width=\"1\">\n";
    svg += "<line x1=\"" + fmt(x0) + "\" y1=\"" + fmt(y0) + "\" x2=\"" + fmt(x1) + "\" y2=\"" + fmt(y0) + "\"/>\n";
    svg += "<line x1=\"" + fmt(x0) + "\" y1=\"" + fmt(y0) + "\" x2=\"" + fmt(x0) + "\" y2=\"" + fmt(y1) + "\"/>\n";
    svg += "</g>\n";
    for (int i = 0; i <= 4; ++i) {
        const double fx = ax.lo + (ax.hi - ax.lo) * i / 4.0;
        const double fy = ay.lo + (ay.hi - ay.lo) * i / 4.0;
        char xl[32], yl[32];
        std::snprintf(xl, sizeof xl, "%.3g", fx);
        std::snprintf(yl, sizeof yl, "%.3g", fy);
        svg += "<text x=\"" + fmt(ax.map(fx, x0, x1)) + "\" y=\"" + fmt(y0 + 16) +
               "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"10\">" + xl + "</text>\n";
        svg += "<text x=\"" + fmt(x0 - 6) + "\" y=\"" + fmt(ay.map(fy, y0, y1) + 3) +
               "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"10\">" + yl + "</text>\n";
    }
    const std::string xlabel = spec.axis_prefix + std::to_string(spec.components.first);
    const std::string ylabel = spec.axis_prefix + std::to_string(spec.components.second);
    svg += "<text x=\"" + fmt((x0 + x1) / 2) + "\" y=\"" + fmt(kHeight - 18) +
           "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"13\">" + xml_escape(xlabel) + "</text>\n";
    svg += "<text x=\"18\" y=\"" + fmt((y0 + y1) / 2) + "\" text-anchor=\"middle\" font-family=\"sans-serif\" "
           "font-size=\"13\" transform=\"rotate(-90 18 " + fmt((y0 + y1) / 2) + ")\">" + xml_escape(ylabel) +
           "</text>\n";

    svg += "<g id=\"points\" fill-opacity=\"0.7\">\n";
    for (const auto& p : points)
        svg += "<circle cx=\"" + fmt(ax.map(p.x, x0, x1)) + "\" cy=\"" + fmt(ay.map(p.y, y0, y1)) +
               "\" r=\"3\" fill=\"" + color_of(p.label) + "\"/>\n";
    svg += "</g>\n";

    svg += "<g id=\"legend\" font-family=\"sans-serif\" font-size=\"12\">\n";
    for (std::size_t i = 0; i < legend.size(); ++i) {
        const double ly = kTop + 10 + 18.0 * static_cast<double>(i);
        svg += "<rect x=\"" + fmt(x1 + 20) + "\" y=\"" + fmt(ly - 9) + "\" width=\"10\" height=\"10\" fill=\"" +
               kPalette[i % kPalette.size()] + "\"/>\n";
        svg += "<text x=\"" + fmt(x1 + 36) + "\" y=\"" + fmt(ly) + "\" data-count=\"" +
               std::to_string(legend[i].count) + "\">" + xml_escape(legend[i].label) + " (" +
               std::to_string(legend[i].count) + ")</text>\n";
    }
    svg += "</g>\n</svg>\n";
    return svg;
}

} // namespace cmca
