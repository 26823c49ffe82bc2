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
#include "cmca/output.hpp"

#include <cmath>
#include <fstream>

#include "cmca/csv.hpp"

namespace cmca {

namespace {

using csv::format_number;

std::string header_line(const std::string& kind, const std::string& meta)
{
    std::string line = std::string("# ") + kOutputSchema + " " + kind;
    if (!meta.empty())
        line += " " + meta;
    return line + "\r\n";
}

std::vector<std::string> component_names(const std::string& prefix, Eigen::Index count)
{
    std::vector<std::string> out;
    for (Eigen::Index j = 0; j < count; ++j)
        out.push_back(prefix + std::to_string(j + 1));
    return out;
}

void append_rows(std::string& out, const CategoricalTable& table, const Matrix<double>& coords)
{
    for (Eigen::Index i = 0; i < coords.rows(); ++i) {
        const auto r = static_cast<std::size_t>(i);
        csv::Record rec{std::to_string(table.row_ids[r]), table.group_of_row[r]};
        for (Eigen::Index j = 0; j < coords.cols(); ++j)
            rec.push_back(format_number(coords(i, j)));
        csv::write_record(out, rec);
    }
}

std::string optional_number(double v)
{
    return std::isnan(v) ? std::string() : format_number(v);
}

// Categories of the top-n variables on the first plotted component, labelled
// by variable in rank order; all others as "other".
std::vector<ScatterPoint> category_points(const FitResult& fit, const Matrix<double>& coords, const PlotSpec& spec)
{
    const auto cx = spec.components.first - 1;
    const auto cy = spec.components.second - 1;
    const auto n = std::min(spec.top_n, fit.vocabulary.num_variables());
    const auto ranked = top_variables(fit.loadings, cx, n);
    std::vector<ScatterPoint> points;
    std::vector<bool> used(fit.vocabulary.size(), false);
    for (const auto& rv : ranked) {
        const auto [first, last] = fit.vocabulary.variable_range(rv.variable);
        for (auto k = first; k < last; ++k) {
            const auto row = static_cast<Eigen::Index>(k);
            points.push_back({coords(row, cx), coords(row, cy), rv.name});
            used[k] = true;
        }
    }
    for (std::size_t k = 0; k < fit.vocabulary.size(); ++k)
        if (!used[k])
            points.push_back({coords(static_cast<Eigen::Index>(k), cx), coords(static_cast<Eigen::Index>(k), cy),
                              "other"});
    return points;
}

void check_components(const PlotSpec& spec, Eigen::Index available)
{
    const auto [a, b] = spec.components;
    if (a == b || a < 1 || b < 1 || a > available || b > available)
        throw Error(ErrorCode::InvalidArgument, "plot components (" + std::to_string(a) + "," + std::to_string(b) +
                                                    ") must be distinct and <= k_prime=" + std::to_string(available));
}

} // namespace

std::string fit_meta(const FitResult& fit)
{
    return "alpha=" + format_number(fit.model.alpha) + " k_prime=" + std::to_string(fit.model.components()) +
           " normalization=" + std::string(to_string(fit.options.normalization)) + " target=" + fit.options.target +
           " background=" + fit.options.background;
}

std::string row_coordinates_csv(const FitResult& fit)
{
    std::string out = header_line("row_coordinates", fit_meta(fit));
    csv::Record header{"row_id", "group"};
    for (auto& name : component_names("cPC", fit.model.components()))
        header.push_back(name);
    csv::write_record(out, header);
    append_rows(out, fit.target.table, fit.target_rows);
    append_rows(out, fit.background.table, fit.background_rows);
    return out;
}

std::string category_coordinates_csv(const CategoryVocabulary& vocab, const Matrix<double>& coordinates,
                                     const std::vector<bool>& zero_mass, const std::string& meta,
                                     const std::string& axis_prefix)
{
    std::string out = header_line("category_coordinates", meta);
    csv::Record header{"variable", "level", "zero_mass"};
    for (auto& name : component_names(axis_prefix, coordinates.cols()))
        header.push_back(name);
    csv::write_record(out, header);
    for (std::size_t k = 0; k < vocab.size(); ++k) {
        const auto& e = vocab.entries()[k];
        csv::Record rec{vocab.variable_names()[e.variable], e.level,
                        k < zero_mass.size() && zero_mass[k] ? "1" : "0"};
        for (Eigen::Index j = 0; j < coordinates.cols(); ++j)
            rec.push_back(format_number(coordinates(static_cast<Eigen::Index>(k), j)));
        csv::write_record(out, rec);
    }
    return out;
}

std::string loadings_csv(const FitResult& fit)
{
    std::string out = header_line("loadings", fit_meta(fit));
    csv::write_record(out, {"kind", "variable", "level", "component", "value", "rank"});
    const auto kp = fit.model.components();
    for (Eigen::Index j = 0; j < kp; ++j)
        csv::write_record(out, {"eigenvalue", "", "", std::to_string(j + 1), format_number(fit.model.eigenvalues(j)), ""});
    for (Eigen::Index j = 0; j < kp; ++j) {
        for (std::size_t k = 0; k < fit.vocabulary.size(); ++k) {
            const auto& e = fit.vocabulary.entries()[k];
            csv::write_record(out, {"category", fit.vocabulary.variable_names()[e.variable], e.level,
                                    std::to_string(j + 1),
                                    format_number(fit.loadings.per_category(static_cast<Eigen::Index>(k), j)), ""});
        }
    }
    const auto d = fit.vocabulary.num_variables();
    for (Eigen::Index j = 0; j < kp; ++j) {
        const auto ranking = top_variables(fit.loadings, j, d);
        std::vector<std::size_t> rank(d);
        for (std::size_t r = 0; r < ranking.size(); ++r)
            rank[ranking[r].variable] = r + 1;
        for (std::size_t v = 0; v < d; ++v)
            csv::write_record(out, {"variable_total", fit.vocabulary.variable_names()[v], "", std::to_string(j + 1),
                                    format_number(fit.loadings.per_variable_total(static_cast<Eigen::Index>(v), j)),
                                    std::to_string(rank[v])});
    }
    return out;
}

std::string trace_csv(const AlphaTrace& trace)
{
    std::string out = header_line("alpha_trace", "epsilon=" + format_number(trace.epsilon) +
                                                     " converged=" + (trace.converged ? "1" : "0") +
                                                     " final_alpha=" + format_number(trace.final_alpha));
    csv::write_record(out, {"t", "alpha", "numerator", "denominator"});
    for (const auto& s : trace.steps)
        csv::write_record(out, {std::to_string(s.t), format_number(s.alpha), optional_number(s.numerator),
                                optional_number(s.denominator)});
    return out;
}

std::string sweep_summary_csv(const std::vector<SweepPoint<double>>& points)
{
    std::string out = header_line("sweep_summary", "points=" + std::to_string(points.size()));
    csv::write_record(out, {"alpha", "status", "lambda1", "lambda2", "sigma2_target", "sigma2_background", "error"});
    for (const auto& p : points)
        csv::write_record(out, {format_number(p.alpha), p.ok() ? "ok" : "failed", optional_number(p.lambda1),
                                optional_number(p.lambda2), optional_number(p.sigma2_target),
                                optional_number(p.sigma2_background),
                                p.error ? std::string(to_string(*p.error)) : std::string()});
    return out;
}

std::string mca_row_coordinates_csv(const McaResult& mca)
{
    std::string out = header_line("mca_row_coordinates",
                                  "k_prime=" + std::to_string(mca.model.components()) +
                                      " normalization=" + std::string(to_string(mca.rows.z.mode)));
    csv::Record header{"row_id", "group"};
    for (auto& name : component_names("PC", mca.model.components()))
        header.push_back(name);
    csv::write_record(out, header);
    append_rows(out, mca.rows.table, mca.row_coordinates);
    return out;
}

std::string mca_category_coordinates_csv(const McaResult& mca)
{
    std::vector<bool> zero_mass(mca.vocabulary.size());
    for (std::size_t k = 0; k < zero_mass.size(); ++k)
        zero_mass[k] = !(mca.model.column_masses(static_cast<Eigen::Index>(k)) > 0.0);
    return category_coordinates_csv(mca.vocabulary, mca.category_coordinates, zero_mass,
                                    "k_prime=" + std::to_string(mca.model.components()), "PC");
}

std::string eigenvalues_csv(const Vector<double>& eigenvalues, const std::string& meta)
{
    std::string out = header_line("eigenvalues", meta);
    csv::write_record(out, {"component", "eigenvalue"});
    for (Eigen::Index j = 0; j < eigenvalues.size(); ++j)
        csv::write_record(out, {std::to_string(j + 1), format_number(eigenvalues(j))});
    return out;
}

std::string matrix_csv(const Matrix<double>& values, const CategoryVocabulary& vocab, const std::string& kind)
{
    if (static_cast<std::size_t>(values.cols()) != vocab.size())
        throw Error(ErrorCode::DimensionMismatch, "matrix columns do not match the vocabulary");
    std::string out = header_line(kind, "rows=" + std::to_string(values.rows()));
    csv::Record header;
    for (std::size_t k = 0; k < vocab.size(); ++k)
        header.push_back(vocab.label(k));
    csv::write_record(out, header);
    for (Eigen::Index i = 0; i < values.rows(); ++i) {
        csv::Record rec;
        for (Eigen::Index j = 0; j < values.cols(); ++j)
            rec.push_back(format_number(values(i, j)));
        csv::write_record(out, rec);
    }
    return out;
}

std::vector<ScatterPoint> fit_plot_points(const FitResult& fit, const PlotSpec& spec, const RecodeSpec& recode)
{
    check_components(spec, fit.model.components());
    const auto cx = spec.components.first - 1;
    const auto cy = spec.components.second - 1;
    switch (spec.kind) {
    case PlotKind::CategoryCoordinates:
        return category_points(fit, fit.categories.values, spec);
    case PlotKind::CategoryLoadings:
        return category_points(fit, fit.loadings.per_category, spec);
    case PlotKind::Rows:
        break;
    }

    std::vector<std::string> target_labels(fit.target.table.num_rows(), fit.options.target);
    if (!spec.color_rule.empty()) {
        const auto* rule = recode.color_rule(spec.color_rule);
        if (!rule)
            throw Error(ErrorCode::InvalidArgument, "no color rule named '" + spec.color_rule + "'");
        const auto hits = evaluate_rule(*rule, fit.target.table);
        for (std::size_t i = 0; i < hits.size(); ++i)
            target_labels[i] = hits[i] ? rule->name : rule->other_name;
    }
    std::vector<ScatterPoint> points;
    for (Eigen::Index i = 0; i < fit.target_rows.rows(); ++i)
        points.push_back({fit.target_rows(i, cx), fit.target_rows(i, cy), target_labels[static_cast<std::size_t>(i)]});
    for (Eigen::Index i = 0; i < fit.background_rows.rows(); ++i)
        points.push_back({fit.background_rows(i, cx), fit.background_rows(i, cy), fit.options.background});
    return points;
}

std::vector<ScatterPoint> mca_plot_points(const McaResult& mca, const PlotSpec& spec)
{
    check_components(spec, mca.model.components());
    const auto cx = spec.components.first - 1;
    const auto cy = spec.components.second - 1;
    std::vector<ScatterPoint> points;
    for (Eigen::Index i = 0; i < mca.row_coordinates.rows(); ++i)
        points.push_back({mca.row_coordinates(i, cx), mca.row_coordinates(i, cy),
                          mca.rows.table.group_of_row[static_cast<std::size_t>(i)]});
    return points;
}

void OutputTree::add(const std::filesystem::path& relative, std::string content)
{
    files_[relative] = std::move(content);
}

void OutputTree::commit(const std::filesystem::path& root) const
{
    namespace fs = std::filesystem;
    std::vector<fs::path> written;
    try {
        for (const auto& [relative, content] : files_) {
            const fs::path target = root / relative;
            fs::create_directories(target.parent_path());
            fs::path temp = target;
            temp += ".tmp";
            {
                std::ofstream out(temp, std::ios::binary | std::ios::trunc);
                if (!out)
                    throw Error(ErrorCode::OutputFailure, "cannot write " + temp.string());
                out.write(content.data(), static_cast<std::streamsize>(content.size()));
                if (!out)
                    throw Error(ErrorCode::OutputFailure, "short write to " + temp.string());
            }
            fs::rename(temp, target);
            written.push_back(target);
        }
    } catch (const std::exception& e) {
        std::error_code ignored;
        for (const auto& path : written)
            fs::remove(path, ignored);
        for (const auto& [relative, content] : files_) {
            fs::path temp = root / relative;
            temp += ".tmp";
            fs::remove(temp, ignored);
        }
        if (const auto* err = dynamic_cast<const Error*>(&e))
            throw *err;
        throw Error(ErrorCode::OutputFailure, e.what());
    }
}

} // namespace cmca
