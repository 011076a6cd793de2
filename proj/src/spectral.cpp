#include "sase/spectral.hpp"

#include "sase/selection.hpp"

#include <Eigen/Eigenvalues>

#include <chrono>
#include <cmath>
#include <limits>

namespace sase {

namespace {

constexpr double kDegreeFloor = 1e-10;

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
    return std::chrono::duration<double>(Clock::now() - start).count();
}

} // namespace

Vector implicit_degrees(const Matrix& ztilde, int* clamped_count) {
    const Vector column_sums = ztilde.transpose() * Vector::Ones(ztilde.rows());
    Vector degrees = ztilde * column_sums;
    int clamped = 0;
    for (std::int64_t i = 0; i < degrees.size(); ++i) {
        if (degrees[i] < kDegreeFloor) {
            degrees[i] = kDegreeFloor;
            ++clamped;
        }
    }
    if (clamped_count) *clamped_count = clamped;
    return degrees;
}

SpectralEmbedding spectral_embed(const Matrix& ztilde, int d, std::uint64_t seed) {
    if (d < 1 || d > std::min(ztilde.rows(), ztilde.cols()))
        throw std::invalid_argument("spectral_embed: embedding dim out of range");

    SpectralEmbedding emb;
    emb.degrees = implicit_degrees(ztilde, &emb.clamped_degree_count);

    Matrix zhat = ztilde;
    for (std::int64_t i = 0; i < zhat.rows(); ++i)
        zhat.row(i) /= std::sqrt(emb.degrees[i]);

    const TruncatedSvdResult svd = truncated_svd(zhat, d, seed);
    emb.vectors = l2_normalize_rows(svd.left_vectors, &emb.zero_row_count);
    return emb;
}

std::vector<int> exact_spectral_cluster(const Matrix& points, int m, double sigma,
                                        std::uint64_t seed) {
    const std::int64_t n = points.rows();
    if (n > 5000) throw std::invalid_argument("exact_spectral_cluster: n exceeds the 5000 guard");
    if (m < 1 || m > n) throw std::invalid_argument("exact_spectral_cluster: bad cluster count");

    Eigen::MatrixXd w(n, n);
    for (std::int64_t i = 0; i < n; ++i) {
        w(i, i) = 1.0;
        for (std::int64_t j = i + 1; j < n; ++j) {
            const double k = gaussian_kernel(points.row(i), points.row(j), sigma);
            w(i, j) = k;
            w(j, i) = k;
        }
    }

    Eigen::VectorXd deg = w.rowwise().sum();
    Eigen::VectorXd inv_sqrt = deg.array().max(kDegreeFloor).rsqrt();
    Eigen::MatrixXd normalized = inv_sqrt.asDiagonal() * w * inv_sqrt.asDiagonal();

    // Bottom-m eigenvectors of the Laplacian == top-m of the normalized kernel.
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(normalized);
    Matrix u(n, m);
    for (int c = 0; c < m; ++c) u.col(c) = eig.eigenvectors().col(n - 1 - c);

    const Matrix rows = l2_normalize_rows(u);
    return kmeans(rows, m, seed).assignments;
}

Matrix make_propagation_base(const GraphBundle& g, const SaseConfig& cfg) {
    return cfg.normalize_features ? l1_normalize_rows(g.features) : g.features;
}

ClusterResult sase_cluster_once(const GraphBundle& g, const SaseConfig& cfg, int order) {
    const NormalizedAdjacency s = normalize_adjacency(g);
    PropagationCache cache(s, make_propagation_base(g, cfg));
    return sase_cluster_once(cfg, cache, order);
}

ClusterResult sase_cluster_once(const SaseConfig& cfg, PropagationCache& cache, int order) {
    cfg.validate();
    if (order < 0) throw std::invalid_argument("sase_cluster_once: order must be >= 0");

    ClusterResult result;
    result.order = order;
    const auto run_start = Clock::now();

    auto stage_start = Clock::now();
    const Matrix& smoothed = cache.advance_to(order);
    result.timings.smooth = seconds_since(stage_start);

    stage_start = Clock::now();
    const Matrix fused = fuse_features(cache.base(), smoothed, cfg.alpha);
    result.timings.fuse = seconds_since(stage_start);

    stage_start = Clock::now();
    const int reduce_rank = static_cast<int>(
        std::min<std::int64_t>(cfg.resolved_reduce_dim(), std::min(fused.rows(), fused.cols())));
    const TruncatedSvdResult reduced = truncated_svd(fused, reduce_rank, cfg.reduce_svd_seed());
    const Matrix z = reduced.left_vectors * reduced.singular_values.asDiagonal();
    result.timings.reduce = seconds_since(stage_start);

    stage_start = Clock::now();
    result.resolved_sigma =
        cfg.sigma > 0.0 ? cfg.sigma
                        : median_bandwidth(z, cfg.bandwidth_sample_cap, cfg.bandwidth_seed());
    result.timings.bandwidth = seconds_since(stage_start);

    stage_start = Clock::now();
    const RffProjector projector = build_projector(
        static_cast<int>(z.cols()), cfg.rff_half_dim, result.resolved_sigma, cfg.rff_seed(),
        cfg.rff_variance);
    const Matrix ztilde = project(projector, z);
    result.timings.project = seconds_since(stage_start);

    stage_start = Clock::now();
    const int embed_dim = static_cast<int>(
        std::min<std::int64_t>(cfg.resolved_embed_dim(), std::min(ztilde.rows(), ztilde.cols())));
    const SpectralEmbedding embedding = spectral_embed(ztilde, embed_dim, cfg.embed_svd_seed());
    result.embedding_zero_rows = embedding.zero_row_count;
    result.timings.embed = seconds_since(stage_start);

    stage_start = Clock::now();
    KmeansOptions km_opts;
    km_opts.max_iter = cfg.kmeans_max_iter;
    km_opts.restarts = cfg.kmeans_restarts;
    KmeansResult km = kmeans(embedding.vectors, cfg.clusters, cfg.kmeans_seed(), km_opts);
    result.timings.cluster = seconds_since(stage_start);

    stage_start = Clock::now();
    result.criterion = cfg.clusters >= 2
                           ? criterion_score(embedding.vectors, km.assignments, km.centroids).value
                           : std::numeric_limits<double>::quiet_NaN();
    // Mean intra-cluster distance: the order-selection rule AGC uses, kept as
    // a comparison metric only.
    double intra_sum = 0.0;
    for (std::int64_t i = 0; i < embedding.vectors.rows(); ++i)
        intra_sum += (embedding.vectors.row(i) - km.centroids.row(km.assignments[i])).norm();
    result.intra_distance = intra_sum / static_cast<double>(embedding.vectors.rows());
    result.timings.score = seconds_since(stage_start);

    result.assignments = std::move(km.assignments);
    result.centroids = std::move(km.centroids);
    result.inertia = km.inertia;
    result.kmeans_iterations = km.iterations_run;
    result.timings.total = seconds_since(run_start);
    return result;
}

} // namespace sase
