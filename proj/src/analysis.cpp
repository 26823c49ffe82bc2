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
#include "cmca/analysis.hpp"

#include <cmath>

namespace cmca {

Dataset Dataset::load(const std::filesystem::path& csv_path, RecodeSpec spec)
{
    auto raw = load_csv(csv_path, spec);
    auto table = apply_recode(raw, spec.rules());
    return from_table(std::move(table), std::move(spec));
}

Dataset Dataset::from_table(CategoricalTable table, RecodeSpec spec)
{
    if (spec.group_column.empty())
        spec.group_column = table.group_column;
    auto vocab = CategoryVocabulary::from_table(table);
    return {std::move(spec), std::move(table), std::move(vocab)};
}

GroupEncoding encode_group(const CategoricalTable& table, const CategoryVocabulary& vocab, Normalization mode)
{
    auto z = correspondence(one_hot<double>(table, vocab), mode);
    auto b = burt(z);
    return {table, std::move(z), std::move(b)};
}

NonconvergenceError::NonconvergenceError(AlphaTrace trace)
    : Error(ErrorCode::NonconvergenceWithinBudget,
            "automatic alpha did not converge within " + std::to_string(trace.iterations()) +
                " iterations (last alpha " + std::to_string(trace.final_alpha) + ")"),
      trace_(std::move(trace))
{
}

ContrastInputs prepare_contrast(const Dataset& data, const std::string& target, const std::string& background,
                                Normalization mode)
{
    auto split = split_groups(data.table, target, background);
    return {split.vocabulary, encode_group(split.target, split.vocabulary, mode),
            encode_group(split.background, split.vocabulary, mode)};
}

FitResult interpret(const ContrastInputs& inputs, CmcaModel<double> model, std::optional<AlphaTrace> trace,
                    const FitOptions& options)
{
    FitResult r{options, inputs.vocabulary, inputs.target, inputs.background, std::move(model), std::move(trace),
                {}, {}, {}, {}, {}};
    r.target_rows = row_coordinates(r.target.z, r.model);
    r.background_rows = row_coordinates(r.background.z, r.model);
    r.categories = category_coordinates(r.target.z, r.target_rows, r.model);
    r.loadings = category_loadings(r.model, r.vocabulary);
    const auto n = std::min(options.top_n, r.vocabulary.num_variables());
    for (Eigen::Index j = 0; j < r.model.components(); ++j)
        r.top.push_back(top_variables(r.loadings, j, n));
    return r;
}

FitResult run_fit(const Dataset& data, const FitOptions& options)
{
    if (options.top_n < 1)
        throw Error(ErrorCode::InvalidArgument, "top-variables must be >= 1");
    const auto inputs = prepare_contrast(data, options.target, options.background, options.normalization);
    if (options.alpha)
        return interpret(inputs, fit_cmca(inputs.target.burt, inputs.background.burt, *options.alpha, options.k_prime),
                         std::nullopt, options);

    auto automatic = auto_alpha(inputs.target.burt, inputs.background.burt, options.k_prime, options.auto_options);
    if (!automatic.trace.converged)
        throw NonconvergenceError(std::move(automatic.trace));
    return interpret(inputs, std::move(automatic.model), std::move(automatic.trace), options);
}

SweepResult run_sweep(const Dataset& data, const SweepOptions& options)
{
    auto inputs = prepare_contrast(data, options.target, options.background, options.normalization);
    auto points = alpha_sweep(inputs.target.burt, inputs.background.burt, options.k_prime, options.grid);
    return {std::move(inputs), std::move(points)};
}

std::vector<double> make_grid(double lo, double hi, double step)
{
    if (!std::isfinite(lo) || !std::isfinite(hi) || !std::isfinite(step) || step <= 0.0 || hi < lo || lo < 0.0)
        throw Error(ErrorCode::InvalidArgument, "sweep needs 0 <= lo <= hi and step > 0");
    const auto count = static_cast<std::size_t>(std::floor((hi - lo) / step + 1e-9)) + 1;
    if (count > 100000)
        throw Error(ErrorCode::InvalidArgument, "sweep grid has more than 100000 points");
    std::vector<double> grid;
    grid.reserve(count);
    for (std::size_t i = 0; i < count; ++i)
        grid.push_back(lo + static_cast<double>(i) * step);
    return grid;
}

McaResult run_mca(const Dataset& data, const McaOptions& options)
{
    const CategoricalTable table = options.subset ? subset_group(data.table, *options.subset) : data.table;
    McaResult r{data.vocabulary, encode_group(table, data.vocabulary, options.normalization), {}, {}, {}};
    r.model = fit_mca(r.rows.z, options.k_prime);
    r.row_coordinates = mca_row_coordinates(r.rows.z, r.model);
    r.category_coordinates = mca_category_coordinates(r.model);
    return r;
}

} // namespace cmca
