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

#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "cmca/analysis.hpp"
#include "cmca/plot.hpp"

namespace cmca {

inline constexpr const char* kOutputSchema = "cmca-output/1";

std::string row_coordinates_csv(const FitResult& fit);
std::string category_coordinates_csv(const CategoryVocabulary& vocab, const Matrix<double>& coordinates,
                                     const std::vector<bool>& zero_mass, const std::string& meta,
                                     const std::string& axis_prefix);
/// Long format: kind,variable,level,component,value,rank.
std::string loadings_csv(const FitResult& fit);
std::string trace_csv(const AlphaTrace& trace);
std::string sweep_summary_csv(const std::vector<SweepPoint<double>>& points);

std::string mca_row_coordinates_csv(const McaResult& mca);
std::string mca_category_coordinates_csv(const McaResult& mca);
std::string eigenvalues_csv(const Vector<double>& eigenvalues, const std::string& meta);

/// Debug export of any K-column matrix, header = vocabulary labels.
std::string matrix_csv(const Matrix<double>& values, const CategoryVocabulary& vocab, const std::string& kind);

std::string fit_meta(const FitResult& fit);

std::vector<ScatterPoint> fit_plot_points(const FitResult& fit, const PlotSpec& spec, const RecodeSpec& recode);
std::vector<ScatterPoint> mca_plot_points(const McaResult& mca, const PlotSpec& spec);

/// Files staged in memory, then written with write-temp-then-rename. If any
/// write fails, files already written by this commit are removed.
class OutputTree {
public:
    void add(const std::filesystem::path& relative, std::string content);
    void commit(const std::filesystem::path& root) const;
    const std::map<std::filesystem::path, std::string>& files() const noexcept { return files_; }

private:
    std::map<std::filesystem::path, std::string> files_;
};

} // namespace cmca
