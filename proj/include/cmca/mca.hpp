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

#include "cmca/encode.hpp"
#include "cmca/spectral.hpp"

namespace cmca {

/// Standard MCA of a Burt matrix: top-k' eigenvectors W (columns), their
/// eigenvalues in descending order, and the column masses D when known.
template <typename Scalar = double>
struct McaModel {
    Matrix<Scalar> eigenvectors;
    Vector<Scalar> eigenvalues;
    Vector<Scalar> column_masses;

    Eigen::Index components() const noexcept { return eigenvectors.cols(); }
};

template <typename Scalar>
McaModel<Scalar> fit_mca(const BurtMatrix<Scalar>& b, Eigen::Index k_prime = 2)
{
    auto pairs = top_eigenpairs(b.values, k_prime);
    return {std::move(pairs.vectors), std::move(pairs.values), Vector<Scalar>()};
}

/// Fits on burt(z) and keeps z's column masses for category coordinates.
template <typename Scalar>
McaModel<Scalar> fit_mca(const CorrespondenceMatrix<Scalar>& z, Eigen::Index k_prime = 2)
{
    auto model = fit_mca(burt(z), k_prime);
    model.column_masses = z.column_masses;
    return model;
}

/// Y = Z W.
template <typename Scalar>
Matrix<Scalar> mca_row_coordinates(const CorrespondenceMatrix<Scalar>& z, const McaModel<Scalar>& model)
{
    if (z.values.cols() != model.eigenvectors.rows())
        throw Error(ErrorCode::DimensionMismatch, "Z has " + std::to_string(z.values.cols()) +
                                                      " columns, model expects " +
                                                      std::to_string(model.eigenvectors.rows()));
    return z.values * model.eigenvectors;
}

/// Y_col = D W.
template <typename Scalar>
Matrix<Scalar> mca_category_coordinates(const McaModel<Scalar>& model)
{
    if (model.column_masses.size() != model.eigenvectors.rows())
        throw Error(ErrorCode::DimensionMismatch, "model carries no column masses for its categories");
    return model.column_masses.asDiagonal() * model.eigenvectors;
}

} // namespace cmca
