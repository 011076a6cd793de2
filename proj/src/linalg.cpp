#include "sase/linalg.hpp"

#include <Eigen/QR>
#include <Eigen/SVD>

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

namespace sase {

namespace {

// Thin Q factor of a column-block, n x k with orthonormal columns.
Matrix thin_q(const Matrix& y) {
    Eigen::HouseholderQR<Matrix> qr(y);
    Matrix q = Matrix::Identity(y.rows(), y.cols());
    q.applyOnTheLeft(qr.householderQ());
    return q;
}

} // namespace

TruncatedSvdResult truncated_svd(const Matrix& m, int rank, std::uint64_t seed) {
    const auto n = m.rows();
    const auto c = m.cols();
    if (rank < 1 || rank > std::min(n, c))
        throw std::invalid_argument("truncated_svd: rank out of range");
    if (!m.allFinite())
        throw NumericalError("truncated_svd: non-finite matrix entry");

    // Oversampling 20 with three power iterations holds the top singular
    // values of gap-free (noise-like) spectra to well under 1% relative error;
    // smaller sketches miss that mark.
    constexpr int kOversample = 20;
    constexpr int kPowerIterations = 3;
    const auto sketch = std::min<std::int64_t>(rank + kOversample, std::min(n, c));

    std::mt19937_64 rng(seed);
    std::normal_distribution<double> gauss(0.0, 1.0);
    Matrix test(c, sketch);
    for (std::int64_t i = 0; i < c; ++i)
        for (std::int64_t j = 0; j < sketch; ++j) test(i, j) = gauss(rng);

    Matrix q = thin_q(m * test);
    for (int it = 0; it < kPowerIterations; ++it) {
        Matrix z = thin_q(m.transpose() * q);
        q = thin_q(m * z);
    }

    // Project to the sketched range and decompose the small factor exactly.
    Matrix b = q.transpose() * m; // sketch x c
    Eigen::JacobiSVD<Matrix> svd(b, Eigen::ComputeThinU | Eigen::ComputeThinV);

    TruncatedSvdResult result;
    result.rank_requested = rank;
    result.left_vectors = (q * svd.matrixU()).leftCols(rank);
    result.singular_values = svd.singularValues().head(rank);
    return result;
}

namespace {

double squared_distance(const Matrix& points, std::int64_t i,
                        const Matrix& centroids, int c) {
    return (points.row(i) - centroids.row(c)).squaredNorm();
}

// k-means++ seeding: first centroid uniform, the rest by squared-distance
// weighting. All randomness comes from the provided stream.
Matrix kmeanspp_init(const Matrix& points, int m, std::mt19937_64& rng) {
    const std::int64_t n = points.rows();
    Matrix centroids(m, points.cols());

    std::uniform_int_distribution<std::int64_t> uniform_index(0, n - 1);
    centroids.row(0) = points.row(uniform_index(rng));

    std::vector<double> d2(n);
    for (std::int64_t i = 0; i < n; ++i)
        d2[i] = (points.row(i) - centroids.row(0)).squaredNorm();

    std::uniform_real_distribution<double> unit(0.0, 1.0);
    for (int c = 1; c < m; ++c) {
        double total = 0.0;
        for (double v : d2) total += v;
        std::int64_t pick;
        if (total > 0.0) {
            const double target = unit(rng) * total;
            double running = 0.0;
            pick = n - 1;
            for (std::int64_t i = 0; i < n; ++i) {
                running += d2[i];
                if (running >= target) { pick = i; break; }
            }
        } else {
            // All remaining distances zero (duplicated points); any choice works.
            pick = uniform_index(rng);
        }
        centroids.row(c) = points.row(pick);
        for (std::int64_t i = 0; i < n; ++i)
            d2[i] = std::min(d2[i], (points.row(i) - centroids.row(c)).squaredNorm());
    }
    return centroids;
}

struct LloydOutcome {
    std::vector<int> assignments;
    Matrix centroids;
    double inertia = 0.0;
    int iterations = 0;
    std::vector<double> inertia_history;
};

LloydOutcome lloyd(const Matrix& points, Matrix centroids, const KmeansOptions& opts) {
    const std::int64_t n = points.rows();
    const int m = static_cast<int>(centroids.rows());

    std::vector<int> assignments(n, -1);
    std::vector<std::int64_t> counts(m, 0);
    std::vector<double> history;
    double prev_inertia = std::numeric_limits<double>::infinity();
    double inertia = 0.0;
    int iterations = 0;

    for (int it = 0; it < opts.max_iter; ++it) {
        ++iterations;
        bool changed = false;
        inertia = 0.0;
        for (std::int64_t i = 0; i < n; ++i) {
            int best = 0;
            double best_d = squared_distance(points, i, centroids, 0);
            for (int c = 1; c < m; ++c) {
                const double d = squared_distance(points, i, centroids, c);
                if (d < best_d) { best_d = d; best = c; }
            }
            if (assignments[i] != best) { assignments[i] = best; changed = true; }
            inertia += best_d;
        }
        history.push_back(inertia);

        std::fill(counts.begin(), counts.end(), 0);
        Matrix sums = Matrix::Zero(m, points.cols());
        for (std::int64_t i = 0; i < n; ++i) {
            sums.row(assignments[i]) += points.row(i);
            ++counts[assignments[i]];
        }

        // Reseed each emptied centroid to the point farthest from its own
        // centroid; claimed points cannot serve two empty clusters.
        std::vector<bool> claimed(n, false);
        for (int c = 0; c < m; ++c) {
            if (counts[c] > 0) continue;
            std::int64_t farthest = -1;
            double far_d = -1.0;
            for (std::int64_t i = 0; i < n; ++i) {
                if (claimed[i] || counts[assignments[i]] <= 1) continue;
                const double d = squared_distance(points, i, centroids, assignments[i]);
                if (d > far_d) { far_d = d; farthest = i; }
            }
            if (farthest < 0) continue; // all points coincide; leave centroid in place
            claimed[farthest] = true;
            sums.row(assignments[farthest]) -= points.row(farthest);
            --counts[assignments[farthest]];
            assignments[farthest] = c;
            sums.row(c) = points.row(farthest);
            counts[c] = 1;
            changed = true;
        }

        for (int c = 0; c < m; ++c)
            if (counts[c] > 0) centroids.row(c) = sums.row(c) / static_cast<double>(counts[c]);

        if (!changed) break;
        if (prev_inertia < std::numeric_limits<double>::infinity() &&
            std::abs(prev_inertia - inertia) <= opts.tol * std::max(prev_inertia, 1e-300))
            break;
        prev_inertia = inertia;
    }

    // Final assignment pass so the nearest-centroid property holds exactly
    // for the returned centroids.
    inertia = 0.0;
    for (std::int64_t i = 0; i < n; ++i) {
        int best = 0;
        double best_d = squared_distance(points, i, centroids, 0);
        for (int c = 1; c < m; ++c) {
            const double d = squared_distance(points, i, centroids, c);
            if (d < best_d) { best_d = d; best = c; }
        }
        assignments[i] = best;
        inertia += best_d;
    }

    return LloydOutcome{std::move(assignments), std::move(centroids), inertia, iterations,
                        std::move(history)};
}

} // namespace

KmeansResult kmeans(const Matrix& points, int m, std::uint64_t seed,
                    const KmeansOptions& opts) {
    const std::int64_t n = points.rows();
    if (n == 0) throw std::invalid_argument("kmeans: empty input");
    if (m < 1 || m > n) throw std::invalid_argument("kmeans: cluster count out of range");
    if (opts.max_iter < 1 || opts.restarts < 1)
        throw std::invalid_argument("kmeans: max_iter and restarts must be >= 1");

    // One sequential stream across restarts: the first restart of any run is
    // identical regardless of the restart count.
    std::mt19937_64 rng(seed);
    LloydOutcome best;
    best.inertia = std::numeric_limits<double>::infinity();
    for (int r = 0; r < opts.restarts; ++r) {
        LloydOutcome outcome = lloyd(points, kmeanspp_init(points, m, rng), opts);
        if (outcome.inertia < best.inertia) best = std::move(outcome);
    }

    KmeansResult result;
    result.assignments = std::move(best.assignments);
    result.centroids = std::move(best.centroids);
    result.inertia = best.inertia;
    result.iterations_run = best.iterations;
    result.inertia_history = std::move(best.inertia_history);
    return result;
}

Matrix l2_normalize_rows(const Matrix& m, int* zero_row_count) {
    Matrix out = m;
    int zeros = 0;
    for (std::int64_t i = 0; i < out.rows(); ++i) {
        const double norm = out.row(i).norm();
        if (norm > 0.0)
            out.row(i) /= norm;
        else
            ++zeros;
    }
    if (zero_row_count) *zero_row_count = zeros;
    return out;
}

} // namespace sase
