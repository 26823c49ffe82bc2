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

#include <atomic>
#include <cmath>
#include <limits>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include "cmca/cmca.hpp"

namespace cmca {

/// One Step-1 evaluation. Step 0 is the fixed start alpha_0 = 0 and carries
/// NaN traces.
struct AlphaStep {
    int t = 0;
    double alpha = 0.0;
    double numerator = std::numeric_limits<double>::quiet_NaN();
    double denominator = std::numeric_limits<double>::quiet_NaN();
};

struct AlphaTrace {
    std::vector<AlphaStep> steps;
    bool converged = false;
    double final_alpha = 0.0;
    double epsilon = 0.0;

    /// Number of Step-1 updates performed.
    int iterations() const noexcept { return steps.empty() ? 0 : steps.back().t; }
};

struct AutoAlphaOptions {
    double epsilon = 1e-3;
    double tol = 1e-6;
    int max_iter = 50;
};

template <typename Scalar = double>
struct AutoAlphaResult {
    CmcaModel<Scalar> model;
    AlphaTrace trace;
};

/// Step 1: alpha = tr(U'B_T U) / (tr(U'B_B U) + eps tr(U'B_T U)). With
/// eps = 0 this is the unregularized ratio and a zero denominator throws.
template <typename Scalar>
AlphaStep trace_ratio_step(const BurtMatrix<Scalar>& b_t, const BurtMatrix<Scalar>& b_b,
                           const Matrix<Scalar>& u, double epsilon, int t)
{
    const double num = static_cast<double>((u.transpose() * b_t.values * u).trace());
    const double den = static_cast<double>((u.transpose() * b_b.values * u).trace()) + epsilon * num;
    if (!std::isfinite(num) || !std::isfinite(den))
        throw Error(ErrorCode::NonFinite, "trace ratio has non-finite terms at step " + std::to_string(t));
    if (!(den > 0.0))
        throw Error(ErrorCode::ZeroDenominator, "trace-ratio denominator is " + std::to_string(den) +
                                                    " at step " + std::to_string(t));
    return {t, num / den, num, den};
}

/// Automatic contrast parameter: alternate Step 1 (alpha from the current
/// U) and Step 2 (U from the top-k' eigenvectors at alpha), starting at
/// alpha_0 = 0, until |alpha_{t+1} - alpha_t| <= tol. A run that exhausts
/// max_iter is returned with `trace.converged == false`.
template <typename Scalar>
AutoAlphaResult<Scalar> auto_alpha(const BurtMatrix<Scalar>& b_t, const BurtMatrix<Scalar>& b_b,
                                   Eigen::Index k_prime = 2, const AutoAlphaOptions& options = {})
{
    if (!(options.epsilon >= 0.0) || !std::isfinite(options.epsilon))
        throw Error(ErrorCode::InvalidArgument, "epsilon must be finite and >= 0");
    if (!(options.tol > 0.0))
        throw Error(ErrorCode::InvalidArgument, "tol must be > 0");
    if (options.max_iter < 1)
        throw Error(ErrorCode::InvalidArgument, "max_iter must be >= 1");

    AlphaTrace trace;
    trace.epsilon = options.epsilon;
    trace.steps.push_back({});

    double alpha = 0.0;
    for (int t = 1; t <= options.max_iter; ++t) {
        const auto model = fit_cmca(b_t, b_b, static_cast<Scalar>(alpha), k_prime);
        const auto step = trace_ratio_step(b_t, b_b, model.eigenvectors, options.epsilon, t);
        trace.steps.push_back(step);
        const bool settled = std::abs(step.alpha - alpha) <= options.tol;
        alpha = step.alpha;
        if (settled) {
            trace.converged = true;
            break;
        }
    }
    trace.final_alpha = alpha;
    return {fit_cmca(b_t, b_b, static_cast<Scalar>(alpha), k_prime), std::move(trace)};
}

template <typename Scalar = double>
struct SweepPoint {
    Scalar alpha = Scalar(0);
    std::optional<CmcaModel<Scalar>> model;
    Scalar lambda1 = std::numeric_limits<Scalar>::quiet_NaN();
    Scalar lambda2 = std::numeric_limits<Scalar>::quiet_NaN();  // NaN when k' = 1
    Scalar sigma2_target = std::numeric_limits<Scalar>::quiet_NaN();
    Scalar sigma2_background = std::numeric_limits<Scalar>::quiet_NaN();
    std::optional<ErrorCode> error;
    std::string message;

    bool ok() const noexcept { return !error.has_value(); }
};

/// Independent fits over `grid`, computed on up to `workers` threads (0 =
/// hardware concurrency) and returned in grid order. A point whose fit fails,
/// or whose k' eigenvalues are not all positive, is marked failed.
template <typename Scalar>
std::vector<SweepPoint<Scalar>> alpha_sweep(const BurtMatrix<Scalar>& b_t, const BurtMatrix<Scalar>& b_b,
                                            Eigen::Index k_prime, const std::vector<Scalar>& grid,
                                            unsigned workers = 0)
{
    if (grid.empty())
        throw Error(ErrorCode::InvalidArgument, "alpha grid is empty");
    for (Scalar a : grid)
        if (!std::isfinite(a) || a < Scalar(0))
            throw Error(ErrorCode::InvalidArgument, "alpha grid values must be finite and >= 0");
    check_same_vocabulary(b_t, b_b);

    std::vector<SweepPoint<Scalar>> points(grid.size());
    auto evaluate = [&](std::size_t i) {
        auto& point = points[i];
        point.alpha = grid[i];
        try {
            auto model = fit_cmca(b_t, b_b, grid[i], k_prime);
            require_positive_eigenvalues(model);
            const auto u1 = model.eigenvectors.col(0);
            point.lambda1 = model.eigenvalues(0);
            if (model.components() > 1)
                point.lambda2 = model.eigenvalues(1);
            point.sigma2_target = quadratic_form(b_t, u1);
            point.sigma2_background = quadratic_form(b_b, u1);
            point.model = std::move(model);
        } catch (const Error& e) {
            point.error = e.code();
            point.message = e.what();
        }
    };

    if (workers == 0)
        workers = std::max(1u, std::thread::hardware_concurrency());
    workers = static_cast<unsigned>(std::min<std::size_t>(workers, grid.size()));
    if (workers <= 1) {
        for (std::size_t i = 0; i < grid.size(); ++i)
            evaluate(i);
        return points;
    }
    std::atomic<std::size_t> next{0};
    std::vector<std::jthread> pool;
    for (unsigned w = 0; w < workers; ++w)
        pool.emplace_back([&] {
            for (std::size_t i = next++; i < grid.size(); i = next++)
                evaluate(i);
        });
    pool.clear();
    return points;
}

} // namespace cmca
