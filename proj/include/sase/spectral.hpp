#pragma once

#include "sase/config.hpp"
#include "sase/graph_core.hpp"
#include "sase/kernel_rff.hpp"
#include "sase/linalg.hpp"
#include "sase/types.hpp"

#include <cstdint>
#include <vector>

namespace sase {

/// Row-normalized top-d left singular vectors of the degree-normalized
/// kernel-space features, plus the implicit degrees they were scaled by.
struct SpectralEmbedding {
    Matrix vectors;           // n x d, nonzero rows have unit norm
    Vector degrees;           // length n, clamped below at 1e-10
    int zero_row_count = 0;   // rows of `vectors` that were all zero
    int clamped_degree_count = 0;
};

/// diag(Z (Z^T 1)) computed right-to-left in O(n * cols) without forming the
/// n x n similarity. RFF estimates of a positive kernel can dip negative, so
/// entries are clamped below at 1e-10; the clamp count is reported.
Vector implicit_degrees(const Matrix& ztilde, int* clamped_count = nullptr);

/// Steps 2-4 of the implicit spectral embedding: scale rows by 1/sqrt(degree),
/// take the top-d left singular vectors, L2-normalize the rows. Never
/// materializes an n x n matrix.
SpectralEmbedding spectral_embed(const Matrix& ztilde, int d, std::uint64_t seed);

/// Classical dense spectral clustering (exact Gaussian similarity, normalized
/// Laplacian, bottom-m eigenvectors, row normalization, k-means). Quadratic;
/// guarded to n <= 5000. Test oracle and small-input CLI baseline.
std::vector<int> exact_spectral_cluster(const Matrix& points, int m, double sigma,
                                        std::uint64_t seed);

struct StageTimings {
    double smooth = 0.0;
    double fuse = 0.0;
    double reduce = 0.0;
    double bandwidth = 0.0;
    double project = 0.0;
    double embed = 0.0;
    double cluster = 0.0;
    double score = 0.0;
    double total = 0.0;
};

struct ClusterResult {
    std::vector<int> assignments;
    Matrix centroids;
    double inertia = 0.0;
    double criterion = 0.0;      // NaN when clusters < 2
    double intra_distance = 0.0; // mean distance to the assigned centroid
    int order = 0;
    double resolved_sigma = 0.0;
    int kmeans_iterations = 0;
    int embedding_zero_rows = 0;
    StageTimings timings;
};

/// One full pipeline pass at a fixed convolution order:
/// smooth -> fuse -> T-SVD reduce -> RFF project -> spectral embed -> k-means.
ClusterResult sase_cluster_once(const GraphBundle& g, const SaseConfig& cfg, int order);

/// Same, reusing an existing propagation cache (one sparse multiply per order
/// increment across calls). The cache base must hold the preprocessed
/// features for `cfg`; see make_propagation_base.
ClusterResult sase_cluster_once(const SaseConfig& cfg, PropagationCache& cache, int order);

/// Bundle features with the configured preprocessing applied.
Matrix make_propagation_base(const GraphBundle& g, const SaseConfig& cfg);

} // namespace sase
