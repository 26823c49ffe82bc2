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
#include "cmca/dataio.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <set>

#include "cmca/csv.hpp"
#include "cmca/error.hpp"

namespace cmca {

namespace {

bool parse_integer(const std::string& s, long long& out)
{
    if (s.empty())
        return false;
    const char* first = s.data();
    const char* last = s.data() + s.size();
    if (*first == '+')
        ++first;
    auto [ptr, ec] = std::from_chars(first, last, out);
    return ec == std::errc() && ptr == last;
}

std::string level_from_json(const nlohmann::json& value)
{
    if (value.is_string())
        return value.get<std::string>();
    if (value.is_number_integer())
        return std::to_string(value.get<long long>());
    throw Error(ErrorCode::InvalidConfig, "level codes must be strings or integers, got " + value.dump());
}

std::vector<std::string> levels_from_json(const nlohmann::json& value)
{
    std::vector<std::string> out;
    for (const auto& item : value)
        out.push_back(level_from_json(item));
    return out;
}

std::vector<std::string> observed_levels(const CategoricalTable& table, std::size_t variable)
{
    std::set<std::string> seen;
    for (const auto& row : table.rows)
        seen.insert(row[variable]);
    std::vector<std::string> levels(seen.begin(), seen.end());
    sort_levels(levels);
    return levels;
}

CategoricalTable rows_with_label(const CategoricalTable& table, const std::string& label)
{
    CategoricalTable out;
    out.schemas = table.schemas;
    out.group_column = table.group_column;
    for (std::size_t i = 0; i < table.num_rows(); ++i) {
        if (table.group_of_row[i] != label)
            continue;
        out.rows.push_back(table.rows[i]);
        out.group_of_row.push_back(table.group_of_row[i]);
        out.row_ids.push_back(table.row_ids[i]);
    }
    return out;
}

} // namespace

void sort_levels(std::vector<std::string>& levels)
{
    long long scratch = 0;
    const bool numeric = std::all_of(levels.begin(), levels.end(),
                                     [&](const std::string& s) { return parse_integer(s, scratch); });
    if (!numeric) {
        std::sort(levels.begin(), levels.end());
        return;
    }
    std::stable_sort(levels.begin(), levels.end(), [](const std::string& a, const std::string& b) {
        long long x = 0, y = 0;
        parse_integer(a, x);
        parse_integer(b, y);
        return x != y ? x < y : a < b;
    });
}

std::optional<std::size_t> CategoricalTable::variable_index(const std::string& name) const
{
    for (std::size_t v = 0; v < schemas.size(); ++v)
        if (schemas[v].name == name)
            return v;
    return std::nullopt;
}

std::vector<std::string> CategoricalTable::group_labels() const
{
    std::vector<std::string> labels;
    for (const auto& g : group_of_row)
        if (std::find(labels.begin(), labels.end(), g) == labels.end())
            labels.push_back(g);
    return labels;
}

std::size_t CategoricalTable::count_group(const std::string& label) const
{
    return static_cast<std::size_t>(std::count(group_of_row.begin(), group_of_row.end(), label));
}

CategoryVocabulary CategoryVocabulary::from_table(const CategoricalTable& table)
{
    CategoryVocabulary vocab;
    for (std::size_t v = 0; v < table.num_variables(); ++v) {
        vocab.variable_names_.push_back(table.schemas[v].name);
        vocab.offsets_.push_back(vocab.entries_.size());
        std::set<std::string> observed;
        for (const auto& row : table.rows)
            observed.insert(row[v]);
        // schema order first; anything observed but undeclared is a contract breach
        for (const auto& level : table.schemas[v].levels) {
            if (!observed.count(level))
                continue;
            vocab.index_[{v, level}] = vocab.entries_.size();
            vocab.entries_.push_back({v, level});
            observed.erase(level);
        }
        if (!observed.empty())
            throw Error(ErrorCode::UnknownLevel, "variable '" + table.schemas[v].name + "' has level '" +
                                                     *observed.begin() + "' outside its schema");
    }
    vocab.offsets_.push_back(vocab.entries_.size());
    return vocab;
}

std::optional<std::size_t> CategoryVocabulary::index_of(std::size_t variable, const std::string& level) const
{
    auto it = index_.find({variable, level});
    if (it == index_.end())
        return std::nullopt;
    return it->second;
}

std::pair<std::size_t, std::size_t> CategoryVocabulary::variable_range(std::size_t variable) const
{
    return {offsets_.at(variable), offsets_.at(variable + 1)};
}

std::string CategoryVocabulary::label(std::size_t column) const
{
    const auto& e = entries_.at(column);
    return variable_names_[e.variable] + ":" + e.level;
}

RecodeSpec RecodeSpec::from_json(const nlohmann::json& doc)
{
    RecodeSpec spec;
    try {
        if (!doc.is_object())
            throw Error(ErrorCode::InvalidConfig, "recode spec must be a JSON object");
        spec.group_column = doc.value("group_column", std::string{});
        if (doc.contains("missing_code"))
            spec.missing_code = level_from_json(doc.at("missing_code"));
        if (doc.contains("missing_tokens"))
            spec.missing_tokens = doc.at("missing_tokens").get<std::vector<std::string>>();
        for (const auto& item : doc.value("variables", nlohmann::json::array())) {
            Variable var;
            var.name = item.at("name").get<std::string>();
            if (item.contains("levels"))
                var.levels = levels_from_json(item.at("levels"));
            if (item.contains("pools")) {
                for (const auto& [pooled, sources] : item.at("pools").items())
                    var.pools[pooled] = levels_from_json(sources);
            }
            for (const auto& prev : spec.variables)
                if (prev.name == var.name)
                    throw Error(ErrorCode::InvalidConfig, "variable '" + var.name + "' declared twice");
            spec.variables.push_back(std::move(var));
        }
        for (const auto& item : doc.value("color_rules", nlohmann::json::array())) {
            ColorRule rule;
            rule.name = item.at("name").get<std::string>();
            rule.other_name = item.value("other", std::string{"other"});
            rule.variables = item.at("variables").get<std::vector<std::string>>();
            rule.levels = levels_from_json(item.at("levels"));
            const auto match = item.value("match", std::string{"any"});
            if (match == "any")
                rule.match = MatchMode::Any;
            else if (match == "all")
                rule.match = MatchMode::All;
            else
                throw Error(ErrorCode::InvalidConfig, "color rule match must be 'any' or 'all'");
            spec.color_rules.push_back(std::move(rule));
        }
    } catch (const nlohmann::json::exception& e) {
        throw Error(ErrorCode::InvalidConfig, std::string("malformed recode spec: ") + e.what());
    }
    return spec;
}

RecodeSpec RecodeSpec::load(const std::filesystem::path& path)
{
    std::ifstream in(path);
    if (!in)
        throw Error(ErrorCode::MissingFile, "cannot open recode spec " + path.string());
    nlohmann::json doc;
    try {
        in >> doc;
    } catch (const nlohmann::json::exception& e) {
        throw Error(ErrorCode::InvalidConfig, std::string("recode spec is not valid JSON: ") + e.what());
    }
    return from_json(doc);
}

std::vector<RecodeRule> RecodeSpec::rules() const
{
    std::vector<RecodeRule> out;
    for (const auto& var : variables) {
        if (var.pools.empty())
            continue;
        RecodeRule rule{var.name, {}};
        for (const auto& [pooled, sources] : var.pools) {
            if (sources.empty())
                throw Error(ErrorCode::InvalidConfig, "pool '" + pooled + "' of '" + var.name + "' has no source levels");
            for (const auto& src : sources)
                if (!rule.mapping.emplace(src, pooled).second)
                    throw Error(ErrorCode::InvalidConfig,
                                "level '" + src + "' of '" + var.name + "' appears in two pools");
        }
        out.push_back(std::move(rule));
    }
    return out;
}

const ColorRule* RecodeSpec::color_rule(const std::string& name) const
{
    for (const auto& rule : color_rules)
        if (rule.name == name)
            return &rule;
    return nullptr;
}

CategoricalTable load_csv(const std::filesystem::path& path, const RecodeSpec& spec)
{
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw Error(ErrorCode::MissingFile, "cannot open " + path.string());
    if (spec.group_column.empty())
        throw Error(ErrorCode::InvalidConfig, "no group column configured");

    auto records = csv::read(in);
    // trailing blank lines
    while (!records.empty() && records.back().size() == 1 && records.back()[0].empty())
        records.pop_back();
    if (records.empty())
        throw Error(ErrorCode::EmptyTable, path.string() + " has no header row");

    const auto& header = records.front();
    std::optional<std::size_t> group_col;
    for (std::size_t c = 0; c < header.size(); ++c) {
        if (header[c] != spec.group_column)
            continue;
        if (group_col)
            throw Error(ErrorCode::HeaderMismatch, "group column '" + spec.group_column + "' appears twice");
        group_col = c;
    }
    if (!group_col)
        throw Error(ErrorCode::HeaderMismatch, "group column '" + spec.group_column + "' not in header");

    // variable order: the spec's when it lists variables, the header's otherwise
    std::vector<std::size_t> source_column;
    std::vector<const RecodeSpec::Variable*> declared;
    if (spec.variables.empty()) {
        for (std::size_t c = 0; c < header.size(); ++c) {
            if (c == *group_col)
                continue;
            source_column.push_back(c);
            declared.push_back(nullptr);
        }
    } else {
        for (std::size_t c = 0; c < header.size(); ++c) {
            if (c == *group_col)
                continue;
            const bool known = std::any_of(spec.variables.begin(), spec.variables.end(),
                                           [&](const auto& v) { return v.name == header[c]; });
            if (!known)
                throw Error(ErrorCode::UnknownVariable, "column '" + header[c] + "' is not declared in the recode spec");
        }
        for (const auto& var : spec.variables) {
            auto it = std::find(header.begin(), header.end(), var.name);
            if (it == header.end())
                throw Error(ErrorCode::HeaderMismatch, "declared variable '" + var.name + "' not in header");
            source_column.push_back(static_cast<std::size_t>(it - header.begin()));
            declared.push_back(&var);
        }
    }
    for (std::size_t i = 0; i < source_column.size(); ++i)
        for (std::size_t j = 0; j < i; ++j)
            if (header[source_column[i]] == header[source_column[j]])
                throw Error(ErrorCode::HeaderMismatch, "duplicate column '" + header[source_column[i]] + "'");
    if (source_column.empty())
        throw Error(ErrorCode::HeaderMismatch, "no variable columns besides the group column");

    // levels each declared variable accepts; empty set = any
    std::vector<std::set<std::string>> accepted(source_column.size());
    for (std::size_t v = 0; v < declared.size(); ++v) {
        if (!declared[v])
            continue;
        accepted[v].insert(declared[v]->levels.begin(), declared[v]->levels.end());
        for (const auto& [pooled, sources] : declared[v]->pools)
            accepted[v].insert(sources.begin(), sources.end());
        if (!accepted[v].empty())
            accepted[v].insert(spec.missing_code);
    }

    const std::set<std::string> missing_tokens(spec.missing_tokens.begin(), spec.missing_tokens.end());

    CategoricalTable table;
    table.group_column = spec.group_column;
    for (std::size_t v = 0; v < source_column.size(); ++v)
        table.schemas.push_back({header[source_column[v]], {}, spec.missing_code});

    for (std::size_t r = 1; r < records.size(); ++r) {
        const auto& rec = records[r];
        if (rec.size() != header.size())
            throw Error(ErrorCode::HeaderMismatch, "row " + std::to_string(r) + " has " + std::to_string(rec.size()) +
                                                       " fields, header has " + std::to_string(header.size()));
        std::vector<std::string> row;
        row.reserve(source_column.size());
        for (std::size_t v = 0; v < source_column.size(); ++v) {
            std::string cell = rec[source_column[v]];
            if (missing_tokens.count(cell))
                cell = spec.missing_code;
            if (!accepted[v].empty() && !accepted[v].count(cell))
                throw Error(ErrorCode::UnknownLevel, "row " + std::to_string(r) + ": level '" + cell +
                                                         "' of '" + table.schemas[v].name +
                                                         "' is neither declared nor covered by a pool");
            row.push_back(std::move(cell));
        }
        table.rows.push_back(std::move(row));
        table.group_of_row.push_back(rec[*group_col]);
        table.row_ids.push_back(r);
    }
    if (table.rows.empty())
        throw Error(ErrorCode::EmptyTable, path.string() + " has no data rows");

    for (std::size_t v = 0; v < table.num_variables(); ++v)
        table.schemas[v].levels = observed_levels(table, v);
    return table;
}

CategoricalTable apply_recode(const CategoricalTable& table, const std::vector<RecodeRule>& rules)
{
    CategoricalTable out = table;
    for (const auto& rule : rules) {
        auto v = out.variable_index(rule.variable);
        if (!v)
            throw Error(ErrorCode::UnknownVariable, "recode rule references unknown variable '" + rule.variable + "'");
        const auto& schema = out.schemas[*v];
        for (const auto& level : schema.levels)
            if (!rule.mapping.count(level) && level != schema.missing_code)
                throw Error(ErrorCode::IncompleteMapping,
                            "recode rule for '" + rule.variable + "' does not map level '" + level + "'");
        for (auto& row : out.rows) {
            auto it = rule.mapping.find(row[*v]);
            if (it != rule.mapping.end())
                row[*v] = it->second;
        }
        out.schemas[*v].levels = observed_levels(out, *v);
    }
    return out;
}

GroupSplit split_groups(const CategoricalTable& table, const std::string& target_label,
                        const std::string& background_label)
{
    if (target_label == background_label)
        throw Error(ErrorCode::DegenerateSplit, "target and background are both '" + target_label + "'");
    for (const auto* label : {&target_label, &background_label})
        if (table.count_group(*label) == 0)
            throw Error(ErrorCode::LabelAbsent, "group label '" + *label + "' does not occur in column '" +
                                                    table.group_column + "'");
    GroupSplit split{rows_with_label(table, target_label), rows_with_label(table, background_label),
                     CategoryVocabulary::from_table(table)};
    if (split.target.rows.empty() || split.background.rows.empty())
        throw Error(ErrorCode::EmptyGroup, "empty group after split");
    return split;
}

CategoricalTable subset_group(const CategoricalTable& table, const std::string& label)
{
    auto out = rows_with_label(table, label);
    if (out.rows.empty())
        throw Error(ErrorCode::EmptyGroup, "no rows with group label '" + label + "'");
    return out;
}

std::vector<bool> evaluate_rule(const ColorRule& rule, const CategoricalTable& table)
{
    std::vector<std::size_t> vars;
    for (const auto& name : rule.variables) {
        auto v = table.variable_index(name);
        if (!v)
            throw Error(ErrorCode::UnknownVariable, "color rule '" + rule.name + "' references unknown variable '" +
                                                        name + "'");
        vars.push_back(*v);
    }
    const std::set<std::string> levels(rule.levels.begin(), rule.levels.end());
    std::vector<bool> out;
    out.reserve(table.num_rows());
    for (const auto& row : table.rows) {
        auto hit = [&](std::size_t v) { return levels.count(row[v]) > 0; };
        const bool matched = rule.match == MatchMode::Any ? std::any_of(vars.begin(), vars.end(), hit)
                                                          : !vars.empty() && std::all_of(vars.begin(), vars.end(), hit);
        out.push_back(matched);
    }
    return out;
}

} // namespace cmca
