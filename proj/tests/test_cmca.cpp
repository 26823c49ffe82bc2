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
#include "doctest.h"

#include <random>

#include "cmca/analysis.hpp"
#include "cmca/cmca.hpp"
#include "cmca/mca.hpp"
#include "support/fixtures.hpp"
#include "support/oracles.hpp"

using namespace cmca;

namespace {

BurtMatrix<double> as_burt(const Eigen::MatrixXd& m)
{
    BurtMatrix<double> b;
    b.values = m;
    return b;
}

CmcaModel<double> model_of(const Eigen::MatrixXd& u, const Eigen::VectorXd& lambda)
{
    CmcaModel<double> m;
    m.eigenvectors = u;
    m.eigenvalues = lambda;
    m.spectral_scale = lambda.cwiseAbs().maxCoeff();
    return m;
}

ErrorCode code_of(auto&& fn)
{
    try {
        fn();
    } catch (const Error& e) {
        return e.code();
    }
    FAIL("expected cmca::Error");
    return ErrorCode::InvalidArgument;
}

CategoryVocabulary two_by_two_vocab()
{
    return CategoryVocabulary::from_table(
        fixture::make_table({"a", "b"}, {{"1", "1"}, {"2", "2"}}, {"T", "T"}));
}

} // namespace

TEST_CASE("alpha = 0 reproduces MCA exactly")
{
    std::mt19937_64 rng(21);
    for (int rep = 0; rep < 10; ++rep) {
        const auto bt = fixture::random_psd(rng, 6);
        const auto bb = fixture::random_psd(rng, 6);
        const auto c = fit_cmca(bt, bb, 0.0, 3);
        const auto m = fit_mca(bt, 3);
        CHECK(c.eigenvectors == m.eigenvectors);
        CHECK(c.eigenvalues == m.eigenvalues);
    }
}

TEST_CASE("diagonal difference")
{
    Eigen::Matrix2d t, b;
    t << 2, 0, 0, 1;
    b << 0, 0, 0, 3;
    const auto m = fit_cmca(as_burt(t), as_burt(b), 1.0, 1);
    CHECK(m.eigenvectors == Eigen::Vector2d(1, 0));
    CHECK(m.eigenvalues(0) == 2.0);
    const auto both = fit_cmca(as_burt(t), as_burt(b), 1.0, 2);
    CHECK(both.eigenvalues(1) == -2.0);
    CHECK(code_of([&] { require_positive_eigenvalues(both); }) == ErrorCode::NonpositiveEigenvalue);
}

TEST_CASE("top eigenvalue against random directions and shifted power iteration")
{
    const auto directions = oracle::random_unit_vectors(6, 100000, 99);
    auto check_pair = [&](const BurtMatrix<double>& bt, const BurtMatrix<double>& bb, double tolerance) {
        const Eigen::MatrixXd c = bt.values - 0.7 * bb.values;
        const auto m = fit_cmca(bt, bb, 0.7, 2);
        const double sampled = oracle::max_quadratic_form(c, directions);
        CHECK(sampled <= m.eigenvalues(0) + 1e-12);
        CHECK(m.eigenvalues(0) - sampled <= tolerance);
        const auto power = oracle::power_iteration(c, 1);
        CHECK(std::abs(power.values(0) - m.eigenvalues(0)) <= 1e-8 * std::max(1.0, std::abs(m.eigenvalues(0))));
    };

    // Burt pairs of random two-variable, three-level tables (K = 6)
    for (std::uint64_t seed = 1; seed <= 5; ++seed) {
        const auto data = fixture::random_pair(seed, 2, 3);
        const auto in = prepare_contrast(data, "T", "B", Normalization::Centered);
        REQUIRE(in.vocabulary.size() == 6);
        check_pair(in.target.burt, in.background.burt, 1e-3);
    }
    // generic PSD pairs of order-one scale: the sampled maximum is only a bound
    std::mt19937_64 rng(33);
    for (int rep = 0; rep < 5; ++rep) {
        const auto bt = fixture::random_psd(rng, 6);
        const auto bb = fixture::random_psd(rng, 6);
        check_pair(bt, bb, std::numeric_limits<double>::infinity());
    }
}

TEST_CASE("eigenpair invariants on random groups")
{
    for (std::uint64_t seed = 1; seed <= 10; ++seed) {
        const auto data = fixture::random_pair(seed);
        const auto in = prepare_contrast(data, "T", "B", Normalization::Centered);
        for (double alpha : {0.0, 0.5, 1.0, 10.0}) {
            CAPTURE(seed);
            CAPTURE(alpha);
            const auto m = fit_cmca(in.target.burt, in.background.burt, alpha, 2);
            const Eigen::MatrixXd c = in.target.burt.values - alpha * in.background.burt.values;
            const auto k = m.eigenvectors.cols();
            CHECK((m.eigenvectors.transpose() * m.eigenvectors - Eigen::MatrixXd::Identity(k, k))
                      .cwiseAbs()
                      .maxCoeff() <= 1e-10);
            for (Eigen::Index j = 0; j < k; ++j) {
                const auto u = m.eigenvectors.col(j);
                CHECK((c * u - m.eigenvalues(j) * u).norm() <= 1e-8);
                CHECK(std::abs(u.dot(c * u) - m.eigenvalues(j)) <= 1e-8);
                // variance contract: lambda = sigma2_T - alpha sigma2_B
                const double st = quadratic_form(in.target.burt, u);
                const double sb = quadratic_form(in.background.burt, u);
                CHECK(std::abs(st - alpha * sb - m.eigenvalues(j)) <= 1e-8);
            }
            CHECK(m.eigenvalues(0) >= m.eigenvalues(1));
        }
    }
}

TEST_CASE("background variance along cPC1 falls as alpha grows")
{
    const auto planted = fixture::planted(1);
    const auto in = prepare_contrast(planted.data, "T", "B", Normalization::Centered);
    double previous = std::numeric_limits<double>::infinity();
    for (double alpha : {0.0, 0.5, 1.0, 2.0, 5.0, 10.0, 100.0}) {
        const auto m = fit_cmca(in.target.burt, in.background.burt, alpha, 1);
        const double sb = quadratic_form(in.background.burt, m.eigenvectors.col(0));
        CHECK(sb <= previous + 1e-12);
        previous = sb;
    }
}

TEST_CASE("row coordinates")
{
    Eigen::MatrixXd z(3, 4);
    z << 1, 2, 3, 4, 5, 6, 7, 8, 9, 10, 11, 12;
    CorrespondenceMatrix<double> zc;
    zc.values = z;
    const auto m = model_of(Eigen::Vector4d(1, 0, 0, 0), Eigen::VectorXd::Ones(1));
    CHECK(row_coordinates(zc, m) == z.col(0));

    zc.values.setZero();
    CHECK(row_coordinates(zc, m) == Eigen::MatrixXd::Zero(3, 1));

    std::mt19937_64 rng(4);
    const auto bt = fixture::random_psd(rng, 5);
    CorrespondenceMatrix<double> zt;
    zt.values = Eigen::MatrixXd::Random(7, 5);
    const auto fit = fit_cmca(bt, bt, 0.5, 2);
    CHECK(row_coordinates(zt, fit) == row_coordinates(CorrespondenceMatrix<double>(zt), fit));

    CorrespondenceMatrix<double> wrong;
    wrong.values = Eigen::MatrixXd::Zero(2, 3);
    CHECK(code_of([&] { row_coordinates(wrong, m); }) == ErrorCode::DimensionMismatch);
}

TEST_CASE("category coordinates: translation identities")
{
    CorrespondenceMatrix<double> z;
    z.values = Eigen::MatrixXd::Constant(1, 1, 0.5);
    z.column_masses = Eigen::VectorXd::Ones(1);
    const auto m = model_of(Eigen::MatrixXd::Ones(1, 1), Eigen::VectorXd::Ones(1));
    Eigen::MatrixXd y(1, 1);
    y << 0.5;
    // single row, single category, unit mass: D^-1 z y = 0.25; with z = 1 it is y itself
    z.values(0, 0) = 1.0;
    CHECK(category_coordinates(z, y, m).values(0, 0) == 0.5);

    const auto zero = category_coordinates(z, Eigen::MatrixXd(Eigen::MatrixXd::Zero(1, 1)), m);
    CHECK(zero.values(0, 0) == 0.0);
}

TEST_CASE("zero-mass categories are flagged and zeroed")
{
    const auto t = fixture::make_table({"a", "b"}, {{"1", "x"}, {"2", "x"}, {"1", "y"}, {"2", "y"}}, {"T", "T", "B", "B"});
    const auto split = split_groups(t, "T", "B");
    const auto et = encode_group(split.target, split.vocabulary, Normalization::Raw);
    const auto eb = encode_group(split.background, split.vocabulary, Normalization::Raw);
    const auto m = fit_cmca(et.burt, eb.burt, 0.0, 1);
    const auto cats = category_coordinates(et.z, row_coordinates(et.z, m), m);
    const auto y_index = *split.vocabulary.index_of(1, "y");
    CHECK(cats.zero_mass[y_index]);
    CHECK(cats.values.row(static_cast<Eigen::Index>(y_index)).isZero(0.0));
    CHECK_FALSE(cats.zero_mass[0]);
}

TEST_CASE("category coordinates at alpha = 0 relate to MCA's")
{
    const auto data = fixture::survey200();
    const auto in = prepare_contrast(data, "A", "B", Normalization::Centered);
    const auto c = fit_cmca(in.target.burt, in.background.burt, 0.0, 2);
    McaModel<double> mca = fit_mca(in.target.z, 2);
    const auto ycmca = category_coordinates(in.target.z, row_coordinates(in.target.z, c), c).values;
    const Eigen::MatrixXd ymca = mca_category_coordinates(mca);
    const Eigen::VectorXd& d = in.target.z.column_masses;
    for (Eigen::Index k = 0; k < ycmca.rows(); ++k) {
        if (d(k) == 0.0)
            continue;
        for (Eigen::Index j = 0; j < 2; ++j) {
            const double expected = ymca(k, j) * std::sqrt(c.eigenvalues(j)) / (d(k) * d(k));
            CHECK(std::abs(ycmca(k, j) - expected) <= 1e-10 * std::max(1.0, std::abs(expected)));
        }
    }
}

TEST_CASE("category coordinates need positive eigenvalues")
{
    CorrespondenceMatrix<double> z;
    z.values = Eigen::MatrixXd::Ones(1, 2);
    z.column_masses = Eigen::VectorXd::Ones(2);
    const auto m = model_of(Eigen::Matrix2d::Identity(), Eigen::Vector2d(1, -1));
    CHECK(code_of([&] { category_coordinates(z, Eigen::MatrixXd(Eigen::MatrixXd::Zero(1, 2)), m); }) ==
          ErrorCode::NonpositiveEigenvalue);
    const auto vocab = CategoryVocabulary::from_table(fixture::make_table({"a", "b"}, {{"1", "1"}}, {"T"}));
    CHECK(code_of([&] { category_loadings(m, vocab); }) == ErrorCode::NonpositiveEigenvalue);
}

TEST_CASE("loadings scale eigenvectors by root eigenvalues")
{
    const auto m = model_of(Eigen::Matrix2d::Identity(), Eigen::Vector2d(4, 1));
    // vocabulary with 1 level per variable: a:1, b:1 gives K = 2
    const auto vocab = CategoryVocabulary::from_table(fixture::make_table({"a", "b"}, {{"1", "1"}}, {"T"}));
    const auto l = category_loadings(m, vocab);
    Eigen::Matrix2d expected;
    expected << 2, 0, 0, 1;
    CHECK(l.per_category == expected);

    const auto m2 = model_of(Eigen::Matrix2d::Identity(), Eigen::Vector2d(1, 4));
    Eigen::Matrix2d expected2;
    expected2 << 1, 0, 0, 2;
    CHECK(category_loadings(m2, vocab).per_category == expected2);
}

TEST_CASE("per-variable totals sum normalized absolute loadings")
{
    // K = 4: variable a owns categories 0,1; b owns 2,3
    Eigen::Vector4d u(0.2, -0.3, 0.4, 0.1);
    const auto m = model_of(u.normalized(), Eigen::VectorXd::Ones(1));
    const auto l = category_loadings(m, two_by_two_vocab());
    CHECK(std::abs(l.per_variable_total(0, 0) - 0.5) <= 1e-15);
    CHECK(std::abs(l.per_variable_total(1, 0) - 0.5) <= 1e-15);

    const auto data = fixture::survey200();
    const auto in = prepare_contrast(data, "A", "B", Normalization::Centered);
    const auto fit = fit_cmca(in.target.burt, in.background.burt, 0.0, 2);
    const auto loadings = category_loadings(fit, in.vocabulary);
    for (Eigen::Index j = 0; j < 2; ++j) {
        CHECK(std::abs(loadings.per_variable_total.col(j).sum() - 1.0) <= 1e-12);
        CHECK((loadings.per_variable_total.col(j).array() >= 0).all());
    }
}

TEST_CASE("top_variables ranking and ties")
{
    CategoryLoadings<double> l;
    l.variable_names = {"a", "b", "c"};
    l.per_variable_total = Eigen::Vector3d(0.5, 0.3, 0.2);
    const auto top = top_variables(l, 0, 2);
    REQUIRE(top.size() == 2);
    CHECK(top[0].name == "a");
    CHECK(top[1].name == "b");
    CHECK(top_variables(l, 0, 3).size() == 3);

    l.per_variable_total = Eigen::Vector3d(0.25, 0.5, 0.25);
    const auto tied = top_variables(l, 0, 3);
    CHECK(tied[0].name == "b");
    CHECK(tied[1].name == "a");
    CHECK(tied[2].name == "c");

    CHECK(code_of([&] { top_variables(l, 1, 1); }) == ErrorCode::ComponentOutOfRange);
    CHECK(code_of([&] { top_variables(l, 0, 0); }) == ErrorCode::InvalidArgument);
}

TEST_CASE("mismatched vocabularies and bad alpha")
{
    const auto a = as_burt(Eigen::MatrixXd::Identity(3, 3));
    const auto b = as_burt(Eigen::MatrixXd::Identity(4, 4));
    CHECK(code_of([&] { fit_cmca(a, b, 1.0, 1); }) == ErrorCode::DimensionMismatch);
    CHECK(code_of([&] { fit_cmca(a, a, -1.0, 1); }) == ErrorCode::InvalidArgument);
}
