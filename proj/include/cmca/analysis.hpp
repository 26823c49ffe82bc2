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
#include <optional>
#include <string>
#include <vector>

#include "cmca/alpha.hpp"
#include "cmca/cmca.hpp"
#include "cmca/dataio.hpp"
#include "cmca/encode.hpp"
#include "cmca/mca.hpp"

namespace cmca {

/// A loaded, recoded table with its full-table vocabulary.
struct Dataset {
    RecodeSpec spec;
    CategoricalTable table;
    CategoryVocabulary vocabulary;

    static Dataset load(const std::filesystem::path& csv_path, RecodeSpec spec);
    static Dataset from_table(CategoricalTable table, RecodeSpec spec = {});
};

struct GroupEncoding {
    CategoricalTable table;
    CorrespondenceMatrix<double> z;
    BurtMatrix<double> burt;
};

/// Z with the group's own grand total and column statistics, then B = Z^T Z.
GroupEncoding encode_group(const CategoricalTable& table, const CategoryVocabulary& vocab, Normalization mode);

struct FitOptions {
    std::string target;
    std::string background;
    std::optional<double> alpha;  // empty: automatic selection
    Eigen::Index k_prime = 2;
    Normalization normalization = Normalization::Centered;
    AutoAlphaOptions auto_options;
    std::size_t top_n = 9;
};

struct FitResult {
    FitOptions options;
    CategoryVocabulary vocabulary;
    GroupEncoding target;
    GroupEncoding background;
    CmcaModel<double> model;
    std::optional<AlphaTrace> trace;
    Matrix<double> target_rows;
    Matrix<double> background_rows;
    CategoryCoordinates<double> categories;
    CategoryLoadings<double> loadings;
    std::vector<std::vector<RankedVariable>> top;  // one ranking per component
};

/// Auto-alpha ran out of iterations; the trace is kept for diagnosis.
class NonconvergenceError : public Error {
public:
    explicit NonconvergenceError(AlphaTrace trace);
    const AlphaTrace& trace() const noexcept { return trace_; }

private:
    AlphaTrace trace_;
};

struct ContrastInputs {
    CategoryVocabulary vocabulary;
    GroupEncoding target;
    GroupEncoding background;
};

ContrastInputs prepare_contrast(const Dataset& data, const std::string& target, const std::string& background,
                                Normalization mode);

/// Interpretation outputs (coordinates, loadings, rankings) of a fitted model.
FitResult interpret(const ContrastInputs& inputs, CmcaModel<double> model, std::optional<AlphaTrace> trace,
                    const FitOptions& options);

FitResult run_fit(const Dataset& data, const FitOptions& options);

struct SweepOptions {
    std::string target;
    std::string background;
    std::vector<double> grid;
    Eigen::Index k_prime = 2;
    Normalization normalization = Normalization::Centered;
};

struct SweepResult {
    ContrastInputs inputs;
    std::vector<SweepPoint<double>> points;
};

SweepResult run_sweep(const Dataset& data, const SweepOptions& options);

/// lo, lo+step, ... up to hi inclusive (within 1e-9 of a step).
std::vector<double> make_grid(double lo, double hi, double step);

struct McaOptions {
    std::optional<std::string> subset;
    Eigen::Index k_prime = 2;
    Normalization normalization = Normalization::Centered;
};

struct McaResult {
    CategoryVocabulary vocabulary;
    GroupEncoding rows;
    McaModel<double> model;
    Matrix<double> row_coordinates;
    Matrix<double> category_coordinates;
};

McaResult run_mca(const Dataset& data, const McaOptions& options);

} // namespace cmca
