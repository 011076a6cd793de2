#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "oracles.hpp"
#include "sase/linalg.hpp"

#include <random>

using namespace sase;

TEST_CASE("truncated_svd: diagonal matrix") {
    Matrix m = Matrix::Zero(3, 3);
    m(0, 0) = 3.0;
    m(1, 1) = 2.0;
    m(2, 2) = 1.0;
    const TruncatedSvdResult svd = truncated_svd(m, 2, 5);
    CHECK(svd.singular_values(0) == doctest::Approx(3.0));
    CHECK(svd.singular_values(1) == doctest::Approx(2.0));
    // Left vectors are the first two basis vectors up to sign.
    CHECK(std::abs(svd.left_vectors(0, 0)) == doctest::Approx(1.0));
    CHECK(std::abs(svd.left_vectors(1, 1)) == doctest::Approx(1.0));
    CHECK(std::abs(svd.left_vectors(2, 0)) < 1e-10);
    CHECK(std::abs(svd.left_vectors(2, 1)) < 1e-10);
}

TEST_CASE("truncated_svd: exact-rank matrix reconstructs to machine precision") {
    const Matrix left = oracle::random_matrix(200, 5, 7);
    const Matrix right = oracle::random_matrix(5, 50, 8);
    const Matrix m = left * right;
    const TruncatedSvdResult svd = truncated_svd(m, 5, 9);

    // Reconstruct via projection onto the recovered left space: for an exactly
    // rank-5 matrix, U U^T M must reproduce M.
    const Matrix reconstructed = svd.left_vectors * (svd.left_vectors.transpose() * m);
    const double rel = (reconstructed - m).norm() / m.norm();
    CHECK(rel < 1e-6);
}

TEST_CASE("truncated_svd: top-10 singular values of a random 100x80 matrix") {
    const Matrix m = oracle::random_matrix(100, 80, 17);
    const TruncatedSvdResult svd = truncated_svd(m, 10, 18);
    const Eigen::VectorXd exact = oracle::dense_singular_values(m);
    for (int i = 0; i < 10; ++i)
        CHECK(std::abs(svd.singular_values(i) - exact(i)) / exact(i) < 0.01);
}

TEST_CASE("truncated_svd: orthonormal columns, sorted non-negative values") {
    for (std::uint64_t seed : {1u, 2u, 3u}) {
        const Matrix m = oracle::random_matrix(80, 40, seed * 31);
        const TruncatedSvdResult svd = truncated_svd(m, 12, seed);
        const Matrix gram = svd.left_vectors.transpose() * svd.left_vectors;
        CHECK((gram - Matrix::Identity(12, 12)).cwiseAbs().maxCoeff() < 1e-8);
        for (int i = 0; i < 12; ++i) {
            CHECK(svd.singular_values(i) >= 0.0);
            if (i > 0) CHECK(svd.singular_values(i) <= svd.singular_values(i - 1) + 1e-12);
        }
    }
}

TEST_CASE("truncated_svd: seed-deterministic, bitwise") {
    const Matrix m = oracle::random_matrix(60, 30, 23);
    const TruncatedSvdResult a = truncated_svd(m, 6, 99);
    const TruncatedSvdResult b = truncated_svd(m, 6, 99);
    CHECK((a.left_vectors - b.left_vectors).cwiseAbs().maxCoeff() == 0.0);
    CHECK((a.singular_values - b.singular_values).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("truncated_svd: subspace matches dense SVD under a spectral gap") {
    // Spectrum with sigma_r / sigma_{r+1} exactly 10 at r = 5:
    // 30, 25, 20, 15, 10 | 1, 0.9, 0.81, ...
    const int n = 120, c = 60, r = 5;
    Eigen::VectorXd spectrum(c);
    for (int i = 0; i < r; ++i) spectrum(i) = 10.0 + 5.0 * (r - 1 - i);
    spectrum(r) = 1.0;
    for (int i = r + 1; i < c; ++i) spectrum(i) = spectrum(i - 1) * 0.9;

    // Build m = U diag(spectrum) V^T from seeded orthonormal factors.
    Eigen::HouseholderQR<Eigen::MatrixXd> qru(Eigen::MatrixXd(oracle::random_matrix(n, c, 41)));
    Eigen::HouseholderQR<Eigen::MatrixXd> qrv(Eigen::MatrixXd(oracle::random_matrix(c, c, 42)));
    const Eigen::MatrixXd u = qru.householderQ() * Eigen::MatrixXd::Identity(n, c);
    const Eigen::MatrixXd v = qrv.householderQ() * Eigen::MatrixXd::Identity(c, c);
    const Matrix m = (u * spectrum.asDiagonal() * v.transpose()).eval();

    const TruncatedSvdResult svd = truncated_svd(m, r, 43);
    const Eigen::MatrixXd exact = oracle::dense_left_singular_vectors(m, r);
    CHECK(oracle::max_principal_angle(svd.left_vectors, exact) < 1e-6);
}

TEST_CASE("truncated_svd: argument validation") {
    const Matrix m = oracle::random_matrix(10, 5, 3);
    CHECK_THROWS_AS(truncated_svd(m, 0, 1), std::invalid_argument);
    CHECK_THROWS_AS(truncated_svd(m, 6, 1), std::invalid_argument);
    Matrix bad = m;
    bad(0, 0) = std::nan("");
    CHECK_THROWS_AS(truncated_svd(bad, 2, 1), NumericalError);
}

TEST_CASE("kmeans: two well-separated pairs") {
    Matrix points(4, 2);
    points << 0.0, 0.0, 0.1, 0.0, 10.0, 0.0, 10.1, 0.0;
    const KmeansResult result = kmeans(points, 2, 7);
    CHECK(result.assignments[0] == result.assignments[1]);
    CHECK(result.assignments[2] == result.assignments[3]);
    CHECK(result.assignments[0] != result.assignments[2]);
    CHECK(result.inertia == doctest::Approx(0.01));
    // Exhaustive bipartition enumeration agrees this is optimal.
    CHECK(result.inertia == doctest::Approx(oracle::best_two_partition_inertia(points)));
}

TEST_CASE("kmeans: n equals m gives a zero-inertia permutation") {
    const Matrix points = oracle::random_matrix(6, 3, 77);
    const KmeansResult result = kmeans(points, 6, 8);
    CHECK(result.inertia == doctest::Approx(0.0));
    std::vector<bool> seen(6, false);
    for (int a : result.assignments) {
        CHECK(!seen[a]);
        seen[a] = true;
    }
}

TEST_CASE("kmeans: identical points, m=2") {
    Matrix points(5, 2);
    for (int i = 0; i < 5; ++i) points.row(i) << 1.5, -2.0;
    const KmeansResult result = kmeans(points, 2, 9);
    CHECK(result.inertia == doctest::Approx(0.0));
}

TEST_CASE("kmeans: nearest-centroid property holds exactly at termination") {
    std::mt19937_64 rng(123);
    for (int trial = 0; trial < 20; ++trial) {
        const Matrix points = oracle::random_matrix(40, 3, rng());
        const KmeansResult result = kmeans(points, 4, rng());
        for (std::int64_t i = 0; i < points.rows(); ++i) {
            int best = 0;
            double best_d = (points.row(i) - result.centroids.row(0)).squaredNorm();
            for (int c = 1; c < 4; ++c) {
                const double d = (points.row(i) - result.centroids.row(c)).squaredNorm();
                if (d < best_d) { best_d = d; best = c; }
            }
            CHECK(result.assignments[i] == best);
        }
    }
}

TEST_CASE("kmeans: inertia non-increasing within a run") {
    std::mt19937_64 rng(321);
    for (int trial = 0; trial < 10; ++trial) {
        const Matrix points = oracle::random_matrix(60, 4, rng());
        KmeansOptions opts;
        opts.restarts = 1;
        const KmeansResult result = kmeans(points, 5, rng(), opts);
        for (std::size_t i = 1; i < result.inertia_history.size(); ++i)
            CHECK(result.inertia_history[i] <= result.inertia_history[i - 1] + 1e-9);
    }
}

TEST_CASE("kmeans: more restarts never hurt under the same seed stream") {
    std::mt19937_64 rng(555);
    for (int trial = 0; trial < 10; ++trial) {
        const Matrix points = oracle::random_matrix(50, 3, rng());
        const std::uint64_t seed = rng();
        KmeansOptions one, five;
        one.restarts = 1;
        five.restarts = 5;
        const double inertia_one = kmeans(points, 4, seed, one).inertia;
        const double inertia_five = kmeans(points, 4, seed, five).inertia;
        CHECK(inertia_five <= inertia_one + 1e-12);
    }
}

TEST_CASE("kmeans: argument validation") {
    const Matrix points = oracle::random_matrix(5, 2, 3);
    CHECK_THROWS_AS(kmeans(points, 6, 1), std::invalid_argument);
    CHECK_THROWS_AS(kmeans(Matrix(0, 2), 1, 1), std::invalid_argument);
}

TEST_CASE("l2_normalize_rows: examples and zero-row flagging") {
    Matrix m(2, 2);
    m << 3.0, 4.0, 0.0, 0.0;
    int zeros = -1;
    const Matrix out = l2_normalize_rows(m, &zeros);
    CHECK(out(0, 0) == doctest::Approx(0.6));
    CHECK(out(0, 1) == doctest::Approx(0.8));
    CHECK(out(1, 0) == 0.0);
    CHECK(out(1, 1) == 0.0);
    CHECK(zeros == 1);

    const Matrix random = oracle::random_matrix(30, 5, 91);
    const Matrix normalized = l2_normalize_rows(random);
    for (std::int64_t i = 0; i < normalized.rows(); ++i)
        CHECK(std::abs(normalized.row(i).norm() - 1.0) < 1e-12);
}
