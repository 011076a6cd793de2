#pragma once

#include "sase/types.hpp"

#include <cstdint>
#include <vector>

namespace sase {

struct TruncatedSvdResult {
    Matrix left_vectors;    // n x r, orthonormal columns
    Vector singular_values; // length r, non-increasing, >= 0
    int rank_requested = 0;
};

/// Randomized truncated SVD via a Gaussian range finder: oversampling 20,
/// three power iterations with re-orthonormalization. Deterministic given seed.
TruncatedSvdResult truncated_svd(const Matrix& m, int rank, std::uint64_t seed);

struct KmeansOptions {
    int max_iter = 50;
    int restarts = 10;
    double tol = 1e-6; // relative inertia change
};

struct KmeansResult {
    std::vector<int> assignments; // length n, values in [0, m)
    Matrix centroids;             // m x d
    double inertia = 0.0;         // sum of squared distances to assigned centroids
    int iterations_run = 0;       // Lloyd iterations of the winning restart
    std::vector<double> inertia_history; // assignment-step inertia per iteration
};

/// Lloyd's algorithm with k-means++ seeding, best-inertia over restarts.
/// Ties in assignment break toward the lowest centroid index; an emptied
/// centroid is reseeded to the point farthest from its assigned centroid.
KmeansResult kmeans(const Matrix& points, int m, std::uint64_t seed,
                    const KmeansOptions& opts = {});

/// Scales every nonzero row to unit Euclidean norm; all-zero rows stay zero
/// and are counted through the optional out-parameter.
Matrix l2_normalize_rows(const Matrix& m, int* zero_row_count = nullptr);

} // namespace sase
