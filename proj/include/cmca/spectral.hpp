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

#include <string>

#include <Eigen/Core>
#include <Eigen/Eigenvalues>

#include "cmca/error.hpp"

namespace cmca {

template <typename Scalar>
struct Eigenpairs {
    Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic> vectors;
    Eigen::Matrix<Scalar, Eigen::Dynamic, 1> values;
    /// Largest |eigenvalue| over the full spectrum; sets what counts as zero.
    Scalar scale = Scalar(0);
};

/// Flips each column so that its largest-magnitude entry is positive (first
/// such entry on ties).
template <typename Derived>
void normalize_signs(Eigen::MatrixBase<Derived>& vectors)
{
    for (Eigen::Index j = 0; j < vectors.cols(); ++j) {
        Eigen::Index pivot = 0;
        vectors.col(j).cwiseAbs().maxCoeff(&pivot);
        if (vectors(pivot, j) < 0)
            vectors.col(j) = -vectors.col(j);
    }
}

/// Top-k eigenpairs of a symmetric matrix by descending algebraic eigenvalue,
/// sign-normalized. Only the lower triangle is read.
template <typename Derived>
Eigenpairs<typename Derived::Scalar> top_eigenpairs(const Eigen::MatrixBase<Derived>& symmetric, Eigen::Index k)
{
    using Scalar = typename Derived::Scalar;
    using MatrixType = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;

    const auto n = symmetric.rows();
    if (symmetric.cols() != n)
        throw Error(ErrorCode::DimensionMismatch, "eigendecomposition of a non-square matrix");
    if (k < 1 || k > n)
        throw Error(ErrorCode::InvalidArgument,
                    "k_prime=" + std::to_string(k) + " outside [1, " + std::to_string(n) + "]");
    if (!symmetric.allFinite())
        throw Error(ErrorCode::NonFinite, "matrix has non-finite entries");

    Eigen::SelfAdjointEigenSolver<MatrixType> solver(MatrixType(symmetric), Eigen::ComputeEigenvectors);
    if (solver.info() != Eigen::Success)
        throw Error(ErrorCode::EigensolverFailure, "symmetric eigensolver did not converge");

    // ascending from the solver; take the last k reversed
    Eigenpairs<Scalar> out;
    out.values = solver.eigenvalues().tail(k).reverse();
    out.vectors = solver.eigenvectors().rightCols(k).rowwise().reverse();
    normalize_signs(out.vectors);
    out.scale = solver.eigenvalues().cwiseAbs().maxCoeff();
    return out;
}

} // namespace cmca
