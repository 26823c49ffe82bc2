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
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "json.hpp"

namespace cmca {

struct VariableSchema {
    std::string name;
    std::vector<std::string> levels;
    std::string missing_code = "99";
};

/// Pools source levels of one variable onto new levels.
struct RecodeRule {
    std::string variable;
    std::map<std::string, std::string> mapping;
};

/// p x d grid of level codes plus a group label per row. `row_ids` are the
/// 1-based data-row numbers of the source file and survive subsetting.
struct CategoricalTable {
    std::vector<VariableSchema> schemas;
    std::vector<std::vector<std::string>> rows;
    std::string group_column;
    std::vector<std::string> group_of_row;
    std::vector<std::size_t> row_ids;

    std::size_t num_rows() const noexcept { return rows.size(); }
    std::size_t num_variables() const noexcept { return schemas.size(); }
    std::optional<std::size_t> variable_index(const std::string& name) const;
    /// Distinct group labels in first-appearance order.
    std::vector<std::string> group_labels() const;
    std::size_t count_group(const std::string& label) const;
};

struct CategoryEntry {
    std::size_t variable;
    std::string level;

    bool operator==(const CategoryEntry&) const = default;
};

/// Column layout shared by every matrix built from one dataset: variable
/// order, then level order within the variable.
class CategoryVocabulary {
public:
    CategoryVocabulary() = default;

    static CategoryVocabulary from_table(const CategoricalTable& table);

    const std::vector<CategoryEntry>& entries() const noexcept { return entries_; }
    const std::vector<std::string>& variable_names() const noexcept { return variable_names_; }
    std::size_t size() const noexcept { return entries_.size(); }
    std::size_t num_variables() const noexcept { return variable_names_.size(); }

    std::optional<std::size_t> index_of(std::size_t variable, const std::string& level) const;
    /// Half-open column range [first, second) of one variable's categories.
    std::pair<std::size_t, std::size_t> variable_range(std::size_t variable) const;
    /// "variable:level", the label used in exported headers.
    std::string label(std::size_t column) const;

    bool operator==(const CategoryVocabulary&) const = default;

private:
    std::vector<std::string> variable_names_;
    std::vector<CategoryEntry> entries_;
    std::vector<std::size_t> offsets_;
    std::map<std::pair<std::size_t, std::string>, std::size_t> index_;
};

enum class MatchMode { Any, All };

/// Declarative subgroup predicate: a row matches when any (or all) of the
/// named variables take one of `levels`.
struct ColorRule {
    std::string name;
    std::string other_name = "other";
    std::vector<std::string> variables;
    std::vector<std::string> levels;
    MatchMode match = MatchMode::Any;
};

/// Parsed RecodeSpec document. See docs/recode-spec.md.
struct RecodeSpec {
    struct Variable {
        std::string name;
        std::vector<std::string> levels;                        // empty: accept any level
        std::map<std::string, std::vector<std::string>> pools;  // pooled level -> source levels
    };

    std::string group_column;
    std::string missing_code = "99";
    std::vector<std::string> missing_tokens = {"", "NA", "N/A", "na", "n/a", "NaN", "nan", ".", "-"};
    std::vector<Variable> variables;
    std::vector<ColorRule> color_rules;

    static RecodeSpec from_json(const nlohmann::json& doc);
    static RecodeSpec load(const std::filesystem::path& path);

    /// One rule per variable that declares pools.
    std::vector<RecodeRule> rules() const;
    const ColorRule* color_rule(const std::string& name) const;
};

struct GroupSplit {
    CategoricalTable target;
    CategoricalTable background;
    CategoryVocabulary vocabulary;
};

/// Levels sorted numerically when every level parses as an integer,
/// lexicographically otherwise.
void sort_levels(std::vector<std::string>& levels);

CategoricalTable load_csv(const std::filesystem::path& path, const RecodeSpec& spec);
CategoricalTable apply_recode(const CategoricalTable& table, const std::vector<RecodeRule>& rules);
GroupSplit split_groups(const CategoricalTable& table, const std::string& target_label,
                        const std::string& background_label);
/// Rows carrying `label`; schemas are kept so the full-table vocabulary applies.
CategoricalTable subset_group(const CategoricalTable& table, const std::string& label);

std::vector<bool> evaluate_rule(const ColorRule& rule, const CategoricalTable& table);

} // namespace cmca
