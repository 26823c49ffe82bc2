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

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <random>
#include <string>
#include <vector>

#include <unistd.h>

#include "cmca/analysis.hpp"
#include "cmca/dataio.hpp"

namespace cmca::fixture {

inline std::string data_path(const std::string& name)
{
    return std::string(CMCA_SOURCE_DIR) + "/data/" + name;
}

/// Writes `content` under a per-process scratch directory and returns the path.
inline std::filesystem::path write_temp(const std::string& name, const std::string& content)
{
    auto dir = std::filesystem::temp_directory_path() / ("cmca-tests-" + std::to_string(::getpid()));
    std::filesystem::create_directories(dir);
    auto path = dir / name;
    std::ofstream(path, std::ios::binary) << content;
    return path;
}

inline std::filesystem::path scratch_dir(const std::string& name)
{
    auto dir = std::filesystem::temp_directory_path() / ("cmca-tests-" + std::to_string(::getpid())) / name;
    std::filesystem::remove_all(dir);
    return dir;
}

/// Table from literal rows; schemas list observed levels in sorted order.
inline CategoricalTable make_table(const std::vector<std::string>& names,
                                   const std::vector<std::vector<std::string>>& rows,
                                   const std::vector<std::string>& groups, const std::string& group_column = "group")
{
    CategoricalTable t;
    t.group_column = group_column;
    for (const auto& n : names)
        t.schemas.push_back({n, {}, "99"});
    t.rows = rows;
    t.group_of_row = groups;
    for (std::size_t i = 0; i < rows.size(); ++i)
        t.row_ids.push_back(i + 1);
    for (std::size_t v = 0; v < names.size(); ++v) {
        std::vector<std::string> levels;
        for (const auto& r : rows)
            if (std::find(levels.begin(), levels.end(), r[v]) == levels.end())
                levels.push_back(r[v]);
        sort_levels(levels);
        t.schemas[v].levels = levels;
    }
    return t;
}

inline std::size_t draw(std::mt19937_64& rng, std::size_t n)
{
    return static_cast<std::size_t>(rng() % n);
}

inline bool chance(std::mt19937_64& rng, double p)
{
    return static_cast<double>(rng() >> 11) * 0x1.0p-53 < p;
}

/// Rows with independent uniform levels "1".."L" per variable.
inline void append_uniform(std::vector<std::vector<std::string>>& rows, std::vector<std::string>& groups,
                           std::mt19937_64& rng, std::size_t n, const std::vector<std::size_t>& levels,
                           const std::string& label)
{
    for (std::size_t i = 0; i < n; ++i) {
        std::vector<std::string> row;
        for (auto L : levels)
            row.push_back(std::to_string(1 + draw(rng, L)));
        rows.push_back(std::move(row));
        groups.push_back(label);
    }
}

/// Two groups ("T", "B") of random sizes drawn independently; the target
/// gets an extra correlated block on the first two variables.
inline Dataset random_pair(std::uint64_t seed, std::size_t variables = 4, std::size_t levels = 3)
{
    std::mt19937_64 rng(seed);
    std::vector<std::string> names;
    for (std::size_t v = 0; v < variables; ++v)
        names.push_back("v" + std::to_string(v + 1));
    std::vector<std::vector<std::string>> rows;
    std::vector<std::string> groups;
    const std::vector<std::size_t> lv(variables, levels);
    append_uniform(rows, groups, rng, 40 + draw(rng, 41), lv, "T");
    for (std::size_t i = 0; i < rows.size(); ++i)
        if (chance(rng, 0.5))
            rows[i][1] = rows[i][0];
    append_uniform(rows, groups, rng, 40 + draw(rng, 41), lv, "B");
    return Dataset::from_table(make_table(names, rows, groups));
}

struct Planted {
    Dataset data;
    std::vector<bool> subgroup;  // per target row
};

/// Target: 300 rows, two 150-row subgroups that differ only on v10..v12;
/// v1..v9 follow one shared five-level latent factor. Background: 300 rows
/// with the same factor structure on v1..v9 and one constant level on
/// v10..v12.
inline Planted planted(std::uint64_t seed)
{
    std::mt19937_64 rng(seed);
    std::vector<std::string> names;
    for (int v = 1; v <= 12; ++v)
        names.push_back("v" + std::to_string(v));
    std::vector<std::vector<std::string>> rows;
    std::vector<std::string> groups;
    std::vector<bool> subgroup;

    auto shared_block = [&](std::vector<std::string>& row) {
        const auto factor = 1 + draw(rng, 5);
        for (int v = 0; v < 9; ++v)
            row.push_back(std::to_string(chance(rng, 0.8) ? factor : 1 + draw(rng, 5)));
    };
    for (int i = 0; i < 300; ++i) {
        const bool first = i < 150;
        std::vector<std::string> row;
        shared_block(row);
        for (int v = 0; v < 3; ++v)
            row.push_back(std::to_string(chance(rng, 0.85) ? (first ? 1 : 3) : 1 + draw(rng, 3)));
        rows.push_back(std::move(row));
        groups.push_back("T");
        subgroup.push_back(first);
    }
    for (int i = 0; i < 300; ++i) {
        std::vector<std::string> row;
        shared_block(row);
        for (int v = 0; v < 3; ++v)
            row.push_back("2");
        rows.push_back(std::move(row));
        groups.push_back("B");
    }
    return {Dataset::from_table(make_table(names, rows, groups)), std::move(subgroup)};
}

/// Target and background drawn from one distribution: six four-level
/// variables, the first three sharing a latent factor.
inline Dataset same_distribution(std::uint64_t seed, std::size_t n)
{
    std::mt19937_64 rng(seed);
    std::vector<std::string> names = {"a", "b", "c", "d", "e", "f"};
    std::vector<std::vector<std::string>> rows;
    std::vector<std::string> groups;
    for (const char* label : {"T", "B"}) {
        for (std::size_t i = 0; i < n; ++i) {
            const auto factor = 1 + draw(rng, 4);
            std::vector<std::string> row;
            for (int v = 0; v < 6; ++v)
                row.push_back(std::to_string(v < 3 && chance(rng, 0.6) ? factor : 1 + draw(rng, 4)));
            rows.push_back(std::move(row));
            groups.push_back(label);
        }
    }
    return Dataset::from_table(make_table(names, rows, groups));
}

inline Dataset survey200()
{
    RecodeSpec spec;
    spec.group_column = "group";
    return Dataset::load(data_path("survey200.csv"), spec);
}

inline Dataset toy()
{
    return Dataset::load(data_path("toy.csv"), RecodeSpec::load(data_path("toy_recode.json")));
}

/// Random symmetric PSD K x K matrix as a Burt matrix of a random Z.
inline BurtMatrix<double> random_psd(std::mt19937_64& rng, Eigen::Index k, Eigen::Index rows = 0)
{
    if (rows == 0)
        rows = k + 3;
    std::normal_distribution<double> normal;
    CorrespondenceMatrix<double> z;
    z.values.resize(rows, k);
    for (Eigen::Index i = 0; i < rows; ++i)
        for (Eigen::Index j = 0; j < k; ++j)
            z.values(i, j) = normal(rng);
    z.column_masses = Eigen::VectorXd::Ones(k);
    return burt(z);
}

inline double separation(const Eigen::VectorXd& y, const std::vector<bool>& group)
{
    double s1 = 0, s2 = 0, n1 = 0, n2 = 0;
    for (Eigen::Index i = 0; i < y.size(); ++i) {
        if (group[static_cast<std::size_t>(i)]) { s1 += y(i); n1 += 1; }
        else { s2 += y(i); n2 += 1; }
    }
    const double m1 = s1 / n1, m2 = s2 / n2;
    double ss = 0;
    for (Eigen::Index i = 0; i < y.size(); ++i) {
        const double m = group[static_cast<std::size_t>(i)] ? m1 : m2;
        ss += (y(i) - m) * (y(i) - m);
    }
    const double pooled_sd = std::sqrt(ss / (n1 + n2 - 2));
    return std::abs(m1 - m2) / pooled_sd;
}

/// Root-mean-square distance of the rows of y from their centroid.
inline double scatteredness(const Eigen::MatrixXd& y)
{
    const Eigen::MatrixXd centered = y.rowwise() - y.colwise().mean();
    return std::sqrt(centered.squaredNorm() / static_cast<double>(y.rows()));
}

} // namespace cmca::fixture
