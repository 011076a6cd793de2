#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "oracles.hpp"
#include "sase/metrics.hpp"

#include <random>

using namespace sase;

namespace {

std::vector<int> random_labels(std::size_t n, int m, std::mt19937_64& rng) {
    std::uniform_int_distribution<int> pick(0, m - 1);
    std::vector<int> out(n);
    for (auto& v : out) v = pick(rng);
    return out;
}

std::vector<int> permuted(const std::vector<int>& labels, const std::vector<int>& perm) {
    std::vector<int> out(labels.size());
    for (std::size_t i = 0; i < labels.size(); ++i) out[i] = perm[labels[i]];
    return out;
}

} // namespace

TEST_CASE("accuracy: examples") {
    CHECK(accuracy({0, 0, 1, 1}, {1, 1, 0, 0}) == doctest::Approx(1.0));
    CHECK(accuracy({0, 1, 0, 1}, {0, 0, 1, 1}) == doctest::Approx(0.5));
    CHECK(accuracy({2, 0, 1, 2}, {2, 0, 1, 2}) == doctest::Approx(1.0));
}

TEST_CASE("accuracy: Hungarian matches exhaustive mapping search") {
    std::mt19937_64 rng(17);
    for (int trial = 0; trial < 60; ++trial) {
        const int mp = 2 + static_cast<int>(rng() % 4); // up to 5
        const int mt = 2 + static_cast<int>(rng() % 4);
        const std::vector<int> pred = random_labels(40, mp, rng);
        const std::vector<int> truth = random_labels(40, mt, rng);
        CHECK(accuracy(pred, truth) == doctest::Approx(oracle::brute_force_accuracy(pred, truth)));
    }
}

TEST_CASE("accuracy: rectangular tables (more predicted clusters than classes)") {
    const std::vector<int> pred{0, 1, 2, 3, 0, 1};
    const std::vector<int> truth{0, 1, 0, 1, 0, 1};
    CHECK(accuracy(pred, truth) == doctest::Approx(oracle::brute_force_accuracy(pred, truth)));
}

TEST_CASE("nmi: examples") {
    CHECK(nmi({0, 0, 1, 1}, {0, 0, 1, 1}) == doctest::Approx(1.0));
    CHECK(nmi({0, 0, 1, 1}, {1, 1, 0, 0}) == doctest::Approx(1.0));
    // Independent balanced partitions share no information.
    CHECK(nmi({0, 0, 1, 1}, {0, 1, 0, 1}) == doctest::Approx(0.0));
    // Both sides a single cluster: defined as 1 by convention.
    CHECK(nmi({0, 0, 0}, {5, 5, 5}) == doctest::Approx(1.0));
    // One side trivial, the other not: no information.
    CHECK(nmi({0, 0, 0, 0}, {0, 1, 0, 1}) == doctest::Approx(0.0));
}

TEST_CASE("nmi: symmetric in its arguments") {
    std::mt19937_64 rng(23);
    for (int trial = 0; trial < 40; ++trial) {
        const std::vector<int> a = random_labels(30, 3, rng);
        const std::vector<int> b = random_labels(30, 4, rng);
        CHECK(std::abs(nmi(a, b) - nmi(b, a)) < 1e-12);
        CHECK(nmi(a, b) >= 0.0);
        CHECK(nmi(a, b) <= 1.0);
    }
}

TEST_CASE("ari: examples") {
    CHECK(ari({0, 1, 2, 0}, {0, 1, 2, 0}) == doctest::Approx(1.0));
    // Crossed balanced partitions: direct evaluation of the adjusted-Rand
    // formula on the 2x2 all-ones table gives -1/2.
    CHECK(ari({0, 0, 1, 1}, {0, 1, 0, 1}) == doctest::Approx(-0.5));
    CHECK(ari({0, 0, 1, 1}, {0, 1, 0, 1}) ==
          doctest::Approx(oracle::pair_counting_ari({0, 0, 1, 1}, {0, 1, 0, 1})));
}

TEST_CASE("ari: agrees with the pair-counting definition on random labelings") {
    std::mt19937_64 rng(31);
    for (int trial = 0; trial < 50; ++trial) {
        const std::vector<int> a = random_labels(35, 4, rng);
        const std::vector<int> b = random_labels(35, 3, rng);
        CHECK(ari(a, b) == doctest::Approx(oracle::pair_counting_ari(a, b)));
    }
}

TEST_CASE("all metrics invariant under cluster-id permutations") {
    std::mt19937_64 rng(41);
    for (int trial = 0; trial < 30; ++trial) {
        const int m = 4;
        const std::vector<int> pred = random_labels(30, m, rng);
        const std::vector<int> truth = random_labels(30, m, rng);

        std::vector<int> perm{0, 1, 2, 3};
        std::shuffle(perm.begin(), perm.end(), rng);
        const std::vector<int> pred_perm = permuted(pred, perm);
        std::shuffle(perm.begin(), perm.end(), rng);
        const std::vector<int> truth_perm = permuted(truth, perm);

        CHECK(accuracy(pred_perm, truth_perm) == doctest::Approx(accuracy(pred, truth)));
        CHECK(nmi(pred_perm, truth_perm) == doctest::Approx(nmi(pred, truth)));
        CHECK(ari(pred_perm, truth_perm) == doctest::Approx(ari(pred, truth)));
    }
}

TEST_CASE("accuracy beats any single fixed mapping (Hungarian optimality)") {
    std::mt19937_64 rng(51);
    for (int trial = 0; trial < 20; ++trial) {
        const std::vector<int> pred = random_labels(25, 3, rng);
        const std::vector<int> truth = random_labels(25, 3, rng);
        const double hungarian = accuracy(pred, truth);
        // Identity mapping is one particular injective mapping.
        std::size_t agree = 0;
        for (std::size_t i = 0; i < pred.size(); ++i)
            if (pred[i] == truth[i]) ++agree;
        CHECK(hungarian >= static_cast<double>(agree) / pred.size() - 1e-12);
    }
}

TEST_CASE("metrics: ids need not be contiguous") {
    const std::vector<int> pred{10, 10, 99, 99};
    const std::vector<int> truth{0, 0, 1, 1};
    CHECK(accuracy(pred, truth) == doctest::Approx(1.0));
    CHECK(nmi(pred, truth) == doctest::Approx(1.0));
    CHECK(ari(pred, truth) == doctest::Approx(1.0));
}

TEST_CASE("metrics: length mismatch rejected") {
    CHECK_THROWS_AS(accuracy({0, 1}, {0, 1, 2}), std::invalid_argument);
    CHECK_THROWS_AS(nmi({}, {}), std::invalid_argument);
}

TEST_CASE("ContingencyTable: counts sum to n") {
    const std::vector<int> pred{0, 0, 1, 1, 2};
    const std::vector<int> truth{0, 1, 0, 1, 1};
    const ContingencyTable table = ContingencyTable::from_labels(pred, truth);
    CHECK(table.counts.sum() == 5);
    CHECK(table.total == 5);
    CHECK(table.counts.rows() == 3);
    CHECK(table.counts.cols() == 2);
}
