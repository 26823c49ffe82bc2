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

// Reference computations that share no code with the library's solvers.

#include <cmath>
#include <random>
#include <vector>

#include <Eigen/Core>

namespace cmca::oracle {

struct PowerPairs {
    Eigen::MatrixXd vectors;
    Eigen::VectorXd values;
};

/// Top-k eigenpairs of a symmetric matrix by power iteration with Hotelling
/// deflation. The matrix is shifted by a Gershgorin bound so the iterated
/// operator is positive semidefinite; the shift is removed from the values.
inline PowerPairs power_iteration(Eigen::MatrixXd a, int k, int max_iter = 2000000, double tol = 1e-15)
{
    const auto n = a.rows();
    double shift = 0.0;
    for (Eigen::Index i = 0; i < n; ++i) {
        double radius = 0.0;
        for (Eigen::Index j = 0; j < n; ++j)
            if (j != i)
                radius += std::abs(a(i, j));
        shift = std::max(shift, -(a(i, i) - radius));
    }
    a.diagonal().array() += shift;

    PowerPairs out{Eigen::MatrixXd(n, k), Eigen::VectorXd(k)};
    for (int c = 0; c < k; ++c) {
        Eigen::VectorXd v = Eigen::VectorXd::LinSpaced(n, 1.0, 2.0);
        v.normalize();
        double lambda = 0.0;
        for (int it = 0; it < max_iter; ++it) {
            Eigen::VectorXd w = a * v;
            const double norm = w.norm();
            if (norm == 0.0) {
                lambda = 0.0;
                break;
            }
            w /= norm;
            const double change = std::min((w - v).norm(), (w + v).norm());
            v = w;
            lambda = v.dot(a * v);
            if (change < tol)
                break;
        }
        Eigen::Index pivot = 0;
        v.cwiseAbs().maxCoeff(&pivot);
        if (v(pivot) < 0)
            v = -v;
        out.vectors.col(c) = v;
        out.values(c) = lambda - shift;
        a -= lambda * v * v.transpose();
    }
    return out;
}

/// Unit vectors drawn uniformly from the sphere, one per column.
inline Eigen::MatrixXd random_unit_vectors(Eigen::Index dim, Eigen::Index count, std::uint64_t seed)
{
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> normal;
    Eigen::MatrixXd v(dim, count);
    for (Eigen::Index j = 0; j < count; ++j) {
        for (Eigen::Index i = 0; i < dim; ++i)
            v(i, j) = normal(rng);
        v.col(j).normalize();
    }
    return v;
}

/// max over the columns v of `directions` of v^T A v.
inline double max_quadratic_form(const Eigen::MatrixXd& a, const Eigen::MatrixXd& directions)
{
    return (directions.array() * (a * directions).array()).colwise().sum().maxCoeff();
}

/// Entry-by-entry sum for B = Z^T Z.
inline Eigen::MatrixXd burt_brute_force(const Eigen::MatrixXd& z)
{
    Eigen::MatrixXd b = Eigen::MatrixXd::Zero(z.cols(), z.cols());
    for (Eigen::Index i = 0; i < z.cols(); ++i)
        for (Eigen::Index j = 0; j < z.cols(); ++j)
            for (Eigen::Index r = 0; r < z.rows(); ++r)
                b(i, j) += z(r, i) * z(r, j);
    return b;
}

} // namespace cmca::oracle
