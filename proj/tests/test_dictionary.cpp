#include "mcgraph/dictionary.hpp"
#include "oracles.hpp"

#include <gtest/gtest.h>

using namespace mcgraph;

namespace {

Eigen::MatrixXd random_matrix(Rng& rng, Eigen::Index r, Eigen::Index c) {
    Eigen::MatrixXd m(r, c);
    for (Eigen::Index i = 0; i < r; ++i)
        for (Eigen::Index j = 0; j < c; ++j) m(i, j) = rng.normal();
    return m;
}

oracle::Matrix to_rows(const Eigen::MatrixXd& x) {
    oracle::Matrix m(static_cast<std::size_t>(x.rows()), std::vector<double>(static_cast<std::size_t>(x.cols())));
    for (Eigen::Index i = 0; i < x.rows(); ++i)
        for (Eigen::Index j = 0; j < x.cols(); ++j) m[i][j] = x(i, j);
    return m;
}

void expect_model_invariants(const DictionaryModel& m) {
    for (Eigen::Index a = 0; a < m.atoms.cols(); ++a) EXPECT_NEAR(m.atoms.col(a).norm(), 1.0, 1e-10);
    for (Eigen::Index l = 0; l < m.coefficients.cols(); ++l) {
        Eigen::Index nz = 0;
        for (Eigen::Index a = 0; a < m.coefficients.rows(); ++a) nz += m.coefficients(a, l) != 0.0;
        EXPECT_LE(static_cast<std::size_t>(nz), m.sparsity);
    }
    for (std::size_t i = 1; i < m.training_log.size(); ++i) EXPECT_LE(m.training_log[i], m.training_log[i - 1] + 1e-9);
}

} // namespace

TEST(Ensemble, TopZSortedThenColumnCentered) {
    auto e = build_ensemble_matrix({{3, 1, 2}}, 2);
    EXPECT_EQ(e.raw(0, 0), 3.0);
    EXPECT_EQ(e.raw(1, 0), 2.0);
    EXPECT_EQ(e.matrix(0, 0), 0.5);
    EXPECT_EQ(e.matrix(1, 0), -0.5);
}

TEST(Ensemble, PaddingAndConstantColumns) {
    auto e = build_ensemble_matrix({{4.0}, {2, 2, 2}}, 3);
    EXPECT_EQ(e.raw.col(0), Eigen::Vector3d(4, 0, 0));
    EXPECT_TRUE(e.matrix.col(1).isZero(0.0));
    auto alt = build_ensemble_matrix({{1, 3}, {3, 5}}, 2, EnsembleCentering::mean_column);
    EXPECT_EQ(alt.matrix, (Eigen::MatrixXd(2, 2) << -1, 1, -1, 1).finished());
    EXPECT_THROW(build_ensemble_matrix({}, 2), Error);
}

TEST(Omp, OneDimensionalAndExactAtom) {
    Eigen::MatrixXd d(3, 1);
    d << 0.6, 0.8, 0;
    Eigen::Vector3d x(1, 2, 3);
    EXPECT_NEAR(omp_encode(d, x, 1)(0), 0.6 + 1.6, 1e-12);

    Eigen::MatrixXd three = Eigen::MatrixXd::Identity(3, 3);
    three.col(2) = Eigen::Vector3d(1, 1, 0).normalized();
    Eigen::Vector3d sig = 2.5 * three.col(1);
    auto c = omp_encode(three, sig, 1);
    EXPECT_EQ(c, Eigen::Vector3d(0, 2.5, 0));
}

TEST(Omp, OrthonormalFullSupportMatchesLeastSquares) {
    Rng rng(71);
    for (int t = 0; t < 20; ++t) {
        Eigen::MatrixXd q = random_matrix(rng, 6, 4).householderQr().householderQ() * Eigen::MatrixXd::Identity(6, 4);
        Eigen::VectorXd x = random_matrix(rng, 6, 1);
        auto c = omp_encode(q, x, 4);
        auto want = oracle::least_squares(to_rows(q), std::vector<double>(x.data(), x.data() + 6));
        for (int a = 0; a < 4; ++a) EXPECT_NEAR(c(a), want[a], 1e-10);
    }
}

TEST(Omp, SparsityOnePicksMaxCorrelation) {
    Rng rng(72);
    for (int t = 0; t < 50; ++t) {
        Eigen::MatrixXd d = random_matrix(rng, 5, 6).colwise().normalized();
        Eigen::VectorXd x = random_matrix(rng, 5, 1);
        auto c = omp_encode(d, x, 1);
        Eigen::Index best = 0;
        for (Eigen::Index a = 1; a < 6; ++a)
            if (std::abs(d.col(a).dot(x)) > std::abs(d.col(best).dot(x))) best = a;
        EXPECT_NE(c(best), 0.0);
        EXPECT_NEAR(c(best), d.col(best).dot(x), 1e-12);
    }
}

TEST(Ksvd, IdenticalColumnsFitExactly) {
    Eigen::MatrixXd z(3, 4);
    for (int l = 0; l < 4; ++l) z.col(l) = Eigen::Vector3d(1, -2, 0.5) * (l + 1);
    auto m = ksvd_train(z, {1, 1, 5});
    ASSERT_FALSE(m.training_log.empty());
    EXPECT_NEAR(m.training_log.front(), 0.0, 1e-12);
    EXPECT_NEAR(m.final_error, 0.0, 1e-12);
    expect_model_invariants(m);
}

TEST(Ksvd, SingleAtomReachesBestRankOne) {
    Rng rng(73);
    for (int t = 0; t < 10; ++t) {
        auto z = random_matrix(rng, 8, 6);
        auto m = ksvd_train(z, {1, 1, 200, 5, 0.0});
        EXPECT_NEAR(m.final_error, oracle::best_rank_error(to_rows(z), 1), 1e-6);
        expect_model_invariants(m);
    }
}

TEST(Ksvd, MonotoneLogAndRankLowerBound) {
    Rng rng(74);
    for (int t = 0; t < 20; ++t) {
        const std::size_t k = 1 + rng.index(3), s = 1 + rng.index(k);
        auto z = random_matrix(rng, 10, 7);
        auto m = ksvd_train(z, {k, s, 20, static_cast<std::uint64_t>(t)});
        expect_model_invariants(m);
        EXPECT_GE(m.final_error, oracle::best_rank_error(to_rows(z), k) - 1e-9);
        EXPECT_LE(m.final_error, m.training_log.back() + 1e-12);
    }
}

TEST(Ksvd, DeterministicPerSeedAndFlagsDegenerate) {
    Rng rng(75);
    auto z = random_matrix(rng, 5, 3);
    auto a = ksvd_train(z, {2, 2, 10, 9});
    auto b = ksvd_train(z, {2, 2, 10, 9});
    EXPECT_EQ(a.atoms, b.atoms);
    EXPECT_EQ(a.coefficients, b.coefficients);
    EXPECT_FALSE(a.degenerate);
    EXPECT_TRUE(ksvd_train(z, {4, 2, 3}).degenerate);
    EXPECT_THROW(ksvd_train(z, {2, 3, 3}), Error);
}

TEST(Ksvd, PermutingGraphsPermutesCoefficients) {
    Rng rng(76);
    // two well separated column families
    Eigen::MatrixXd z(6, 6);
    Eigen::VectorXd u = random_matrix(rng, 6, 1).normalized(), v = random_matrix(rng, 6, 1).normalized();
    for (int l = 0; l < 6; ++l) z.col(l) = (l < 3 ? u : v) * (1.0 + 0.1 * l);
    auto m = ksvd_train(z, {2, 1, 20});
    std::vector<Eigen::Index> perm{5, 3, 1, 0, 2, 4};
    Eigen::MatrixXd zp(6, 6);
    for (int l = 0; l < 6; ++l) zp.col(l) = z.col(perm[l]);
    auto mp = ksvd_train(zp, {2, 1, 20});
    EXPECT_NEAR(m.final_error, mp.final_error, 1e-9);
    // match atoms up to order and sign
    for (Eigen::Index a = 0; a < 2; ++a) {
        double best = 0.0;
        for (Eigen::Index b = 0; b < 2; ++b) best = std::max(best, std::abs(m.atoms.col(a).dot(mp.atoms.col(b))));
        EXPECT_NEAR(best, 1.0, 1e-9);
    }
    for (int l = 0; l < 6; ++l) {
        EXPECT_NEAR((m.atoms * m.coefficients.col(perm[l]) - mp.atoms * mp.coefficients.col(l)).norm(), 0.0, 1e-9);
    }
}

TEST(KMeans, SeparatedPointsAndEdgeCounts) {
    Eigen::MatrixXd c(2, 4);
    c << 0, 0, 5, 5, 0, 0, 5, 5;
    EXPECT_EQ(classify_coefficients(c, 2), (std::vector<std::size_t>{0, 0, 1, 1}));
    EXPECT_EQ(classify_coefficients(c, 1), std::vector<std::size_t>(4, 0));
    Eigen::MatrixXd d(1, 3);
    d << 1, 4, 9;
    auto each = kmeans(d, 3);
    EXPECT_EQ(each.labels, (std::vector<std::size_t>{0, 1, 2}));
    EXPECT_EQ(each.inertia, 0.0);
    try {
        classify_coefficients(d, 4);
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), ErrorCode::dimension_error);
    }
}
