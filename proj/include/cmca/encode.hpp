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

#include <cmath>
#include <string>
#include <string_view>

#include <Eigen/Core>

#include "cmca/dataio.hpp"
#include "cmca/error.hpp"

namespace cmca {

template <typename Scalar>
using Matrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
template <typename Scalar>
using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

enum class Normalization { Raw, Centered, CaStandardized };

inline std::string_view to_string(Normalization mode) noexcept
{
    switch (mode) {
    case Normalization::Raw: return "raw";
    case Normalization::Centered: return "centered";
    case Normalization::CaStandardized: return "ca";
    }
    return "centered";
}

inline Normalization parse_normalization(std::string_view text)
{
    if (text == "raw")
        return Normalization::Raw;
    if (text == "centered")
        return Normalization::Centered;
    if (text == "ca" || text == "ca_standardized")
        return Normalization::CaStandardized;
    throw Error(ErrorCode::InvalidArgument, "unknown normalization '" + std::string(text) + "'");
}

/// One-hot indicator matrix G (rows x K); `grand_total` is N = rows * d.
template <typename Scalar = double>
struct DisjunctiveMatrix {
    Matrix<Scalar> values;
    Eigen::Index variables = 0;
    Eigen::Index grand_total = 0;
};

/// Z derived from G. `column_masses` are always the column sums of G / N
/// (the CA masses), whatever the normalization applied to `values`.
template <typename Scalar = double>
struct CorrespondenceMatrix {
    Matrix<Scalar> values;
    Normalization mode = Normalization::Centered;
    Vector<Scalar> column_masses;
};

/// B = Z^T Z, stored full and exactly symmetric.
template <typename Scalar = double>
struct BurtMatrix {
    Matrix<Scalar> values;
    Eigen::Index source_rows = 0;

    Eigen::Index size() const noexcept { return values.rows(); }
};

template <typename Scalar = double>
DisjunctiveMatrix<Scalar> one_hot(const CategoricalTable& table, const CategoryVocabulary& vocab)
{
    const auto rows = static_cast<Eigen::Index>(table.num_rows());
    const auto d = static_cast<Eigen::Index>(table.num_variables());
    if (static_cast<std::size_t>(d) != vocab.num_variables())
        throw Error(ErrorCode::DimensionMismatch, "table and vocabulary disagree on the number of variables");

    DisjunctiveMatrix<Scalar> g;
    g.values = Matrix<Scalar>::Zero(rows, static_cast<Eigen::Index>(vocab.size()));
    g.variables = d;
    g.grand_total = rows * d;
    for (Eigen::Index i = 0; i < rows; ++i) {
        for (Eigen::Index v = 0; v < d; ++v) {
            const auto& level = table.rows[static_cast<std::size_t>(i)][static_cast<std::size_t>(v)];
            auto k = vocab.index_of(static_cast<std::size_t>(v), level);
            if (!k)
                throw Error(ErrorCode::CellOutsideVocabulary,
                            "level '" + level + "' of '" + table.schemas[static_cast<std::size_t>(v)].name +
                                "' is not in the vocabulary");
            g.values(i, static_cast<Eigen::Index>(*k)) = Scalar(1);
        }
    }
    return g;
}

template <typename Scalar>
CorrespondenceMatrix<Scalar> correspondence(const DisjunctiveMatrix<Scalar>& g,
                                            Normalization mode = Normalization::Centered)
{
    if (g.grand_total <= 0 || g.values.size() == 0)
        throw Error(ErrorCode::EmptyMatrix, "correspondence matrix of an empty disjunctive matrix");

    CorrespondenceMatrix<Scalar> z;
    z.mode = mode;
    const Matrix<Scalar> p = g.values / static_cast<Scalar>(g.grand_total);
    z.column_masses = p.colwise().sum().transpose();

    switch (mode) {
    case Normalization::Raw:
        z.values = p;
        break;
    case Normalization::Centered:
        z.values = p.rowwise() - p.colwise().mean();
        break;
    case Normalization::CaStandardized: {
        // (P - r c^T) / sqrt(r c^T), zero where the expected mass vanishes
        const Vector<Scalar> r = p.rowwise().sum();
        const Vector<Scalar>& c = z.column_masses;
        z.values.resize(p.rows(), p.cols());
        for (Eigen::Index j = 0; j < p.cols(); ++j) {
            for (Eigen::Index i = 0; i < p.rows(); ++i) {
                const Scalar expected = r(i) * c(j);
                z.values(i, j) = expected > Scalar(0) ? (p(i, j) - expected) / std::sqrt(expected) : Scalar(0);
            }
        }
        break;
    }
    }
    return z;
}

template <typename Scalar>
BurtMatrix<Scalar> burt(const CorrespondenceMatrix<Scalar>& z)
{
    const auto k = z.values.cols();
    BurtMatrix<Scalar> b;
    b.source_rows = z.values.rows();
    b.values = Matrix<Scalar>::Zero(k, k);
    b.values.template selfadjointView<Eigen::Lower>().rankUpdate(z.values.transpose());
    b.values.template triangularView<Eigen::StrictlyUpper>() = b.values.transpose();
    return b;
}

} // namespace cmca
