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
#include <limits>
#include <numeric>
#include <string>
#include <vector>

#include "cmca/encode.hpp"
#include "cmca/spectral.hpp"

namespace cmca {

/// Contrastive fit: top-k' eigenpairs of B_T - alpha * B_B, descending by
/// algebraic value. Eigenvalues may be zero or negative.
template <typename Scalar = double>
struct CmcaModel {
    Scalar alpha = Scalar(0);
    Matrix<Scalar> eigenvectors;
    Vector<Scalar> eigenvalues;
    /// Largest |eigenvalue| of the whole contrast matrix.
    Scalar spectral_scale = Scalar(0);

    Eigen::Index components() const noexcept { return eigenvectors.cols(); }
};

template <typename Scalar>
struct CategoryCoordinates {
    Matrix<Scalar> values;
    /// Categories never observed in the target; their rows are zero.
    std::vector<bool> zero_mass;
};

template <typename Scalar>
struct CategoryLoadings {
    Matrix<Scalar> per_category;        // K x k'
    Matrix<Scalar> per_variable_total;  // d x k'
    std::vector<std::string> variable_names;
};

struct RankedVariable {
    std::size_t variable;
    std::string name;
    double total;
};

/// u^T B u
template <typename Scalar, typename Derived>
Scalar quadratic_form(const BurtMatrix<Scalar>& b, const Eigen::MatrixBase<Derived>& u)
{
    return u.dot(b.values * u);
}

template <typename Scalar>
void check_same_vocabulary(const BurtMatrix<Scalar>& b_t, const BurtMatrix<Scalar>& b_b)
{
    if (b_t.size() != b_b.size() || b_t.values.cols() != b_b.values.cols())
        throw Error(ErrorCode::DimensionMismatch, "target Burt matrix is " + std::to_string(b_t.size()) +
                                                      "x" + std::to_string(b_t.size()) + ", background is " +
                                                      std::to_string(b_b.size()) + "x" + std::to_string(b_b.size()));
}

template <typename Scalar>
CmcaModel<Scalar> fit_cmca(const BurtMatrix<Scalar>& b_t, const BurtMatrix<Scalar>& b_b, Scalar alpha,
                           Eigen::Index k_prime = 2)
{
    check_same_vocabulary(b_t, b_b);
    if (!std::isfinite(alpha) || alpha < Scalar(0))
        throw Error(ErrorCode::InvalidArgument, "contrast parameter must be finite and >= 0");
    if (!b_t.values.allFinite() || !b_b.values.allFinite())
        throw Error(ErrorCode::NonFinite, "Burt matrix has non-finite entries");

    const Matrix<Scalar> contrast = b_t.values - alpha * b_b.values;
    auto pairs = top_eigenpairs(contrast, k_prime);
    return {alpha, std::move(pairs.vectors), std::move(pairs.values), pairs.scale};
}

/// Throws NonpositiveEigenvalue unless every eigenvalue exceeds numerical zero
/// relative to the contrast matrix's spectrum.
template <typename Scalar>
void require_positive_eigenvalues(const CmcaModel<Scalar>& model)
{
    const Scalar zero = Scalar(8) * std::numeric_limits<Scalar>::epsilon() *
                        static_cast<Scalar>(model.eigenvectors.rows()) * model.spectral_scale;
    for (Eigen::Index j = 0; j < model.eigenvalues.size(); ++j) {
        if (!(model.eigenvalues(j) > zero))
            throw Error(ErrorCode::NonpositiveEigenvalue,
                        "eigenvalue " + std::to_string(j + 1) + " is not positive at alpha=" +
                            std::to_string(model.alpha) + "; reduce k_prime or change alpha");
    }
}

/// Y = Z U, for the target (and, through the same U, the background).
template <typename Scalar>
Matrix<Scalar> row_coordinates(const CorrespondenceMatrix<Scalar>& z, const CmcaModel<Scalar>& model)
{
    if (z.values.cols() != model.eigenvectors.rows())
        throw Error(ErrorCode::DimensionMismatch, "Z has " + std::to_string(z.values.cols()) +
                                                      " columns, model expects " +
                                                      std::to_string(model.eigenvectors.rows()));
    return z.values * model.eigenvectors;
}

/// Translation formula: Y_col = D_T^-1 Z_T^T Y_row diag(lambda)^-1/2.
template <typename Scalar>
CategoryCoordinates<Scalar> category_coordinates(const CorrespondenceMatrix<Scalar>& z_t,
                                                 const Matrix<Scalar>& y_row_t, const CmcaModel<Scalar>& model)
{
    const auto k = model.eigenvectors.rows();
    if (z_t.values.cols() != k || z_t.column_masses.size() != k || y_row_t.rows() != z_t.values.rows() ||
        y_row_t.cols() != model.components())
        throw Error(ErrorCode::DimensionMismatch, "category coordinates: Z_T, row coordinates and model disagree");
    require_positive_eigenvalues(model);

    const Vector<Scalar> inv_sqrt_lambda = model.eigenvalues.cwiseSqrt().cwiseInverse();
    CategoryCoordinates<Scalar> out;
    out.values = (z_t.values.transpose() * y_row_t) * inv_sqrt_lambda.asDiagonal();
    out.zero_mass.assign(static_cast<std::size_t>(k), false);
    for (Eigen::Index c = 0; c < k; ++c) {
        const Scalar mass = z_t.column_masses(c);
        if (mass > Scalar(0)) {
            out.values.row(c) /= mass;
        } else {
            out.values.row(c).setZero();
            out.zero_mass[static_cast<std::size_t>(c)] = true;
        }
    }
    return out;
}

/// L = U diag(lambda)^1/2, plus per-variable sums of |L| normalized to unit
/// column sum.
template <typename Scalar>
CategoryLoadings<Scalar> category_loadings(const CmcaModel<Scalar>& model, const CategoryVocabulary& vocab)
{
    const auto k = model.eigenvectors.rows();
    if (static_cast<std::size_t>(k) != vocab.size())
        throw Error(ErrorCode::DimensionMismatch, "model and vocabulary disagree on K");
    require_positive_eigenvalues(model);

    CategoryLoadings<Scalar> out;
    out.per_category = model.eigenvectors * model.eigenvalues.cwiseSqrt().asDiagonal();
    out.variable_names = vocab.variable_names();

    Matrix<Scalar> normalized = out.per_category.cwiseAbs();
    for (Eigen::Index j = 0; j < normalized.cols(); ++j) {
        const Scalar total = normalized.col(j).sum();
        if (total > Scalar(0))
            normalized.col(j) /= total;
    }
    const auto d = static_cast<Eigen::Index>(vocab.num_variables());
    out.per_variable_total = Matrix<Scalar>::Zero(d, model.components());
    for (Eigen::Index v = 0; v < d; ++v) {
        const auto [first, last] = vocab.variable_range(static_cast<std::size_t>(v));
        out.per_variable_total.row(v) = normalized
                                            .middleRows(static_cast<Eigen::Index>(first),
                                                        static_cast<Eigen::Index>(last - first))
                                            .colwise()
                                            .sum();
    }
    return out;
}

/// The n variables with the largest totals on `component` (0-based); ties
/// keep schema order.
template <typename Scalar>
std::vector<RankedVariable> top_variables(const CategoryLoadings<Scalar>& loadings, Eigen::Index component,
                                          std::size_t n)
{
    const auto& totals = loadings.per_variable_total;
    if (component < 0 || component >= totals.cols())
        throw Error(ErrorCode::ComponentOutOfRange, "component " + std::to_string(component + 1) + " of " +
                                                        std::to_string(totals.cols()));
    const auto d = static_cast<std::size_t>(totals.rows());
    if (n < 1 || n > d)
        throw Error(ErrorCode::InvalidArgument, "top-n must be in [1, " + std::to_string(d) + "]");

    std::vector<std::size_t> order(d);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        return totals(static_cast<Eigen::Index>(a), component) > totals(static_cast<Eigen::Index>(b), component);
    });
    std::vector<RankedVariable> out;
    for (std::size_t i = 0; i < n; ++i)
        out.push_back({order[i], loadings.variable_names[order[i]],
                       static_cast<double>(totals(static_cast<Eigen::Index>(order[i]), component))});
    return out;
}

} // namespace cmca
