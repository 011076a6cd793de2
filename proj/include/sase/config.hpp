#pragma once

#include "sase/kernel_rff.hpp"

#include <cstdint>

namespace sase {

/// All pipeline hyper-parameters. Stage RNG seeds derive from `seed` by fixed
/// offsets so reruns at different orders share their randomness.
struct SaseConfig {
    bool adaptive = false;
    int order = 1;      // fixed-order mode; ignored when adaptive
    int max_order = 50; // adaptive-mode cap

    double alpha = 0.2; // weight of the original features, in [0, 1]
    int dim = 16;       // shared reduced dimensionality / embedding width d
    int reduce_dim = 0; // optional override for the feature-reduction rank (0 = dim)
    int embed_dim = 0;  // optional override for the spectral width (0 = dim)

    int rff_half_dim = 50; // D; the projected dimension is 2D (default 100)
    double sigma = 0.0;    // Gaussian bandwidth; 0 = median heuristic
    FrequencyVariance rff_variance = FrequencyVariance::KernelDual;
    int bandwidth_sample_cap = 1000;

    int clusters = 2; // m
    std::uint64_t seed = 42;
    int kmeans_restarts = 10;
    int kmeans_max_iter = 50;

    bool normalize_features = false; // opt-in row-L1 feature preprocessing

    int resolved_reduce_dim() const { return reduce_dim > 0 ? reduce_dim : dim; }
    int resolved_embed_dim() const { return embed_dim > 0 ? embed_dim : dim; }

    // Fixed per-stage seed offsets from the master seed.
    std::uint64_t bandwidth_seed() const { return seed + 1; }
    std::uint64_t rff_seed() const { return seed + 2; }
    std::uint64_t reduce_svd_seed() const { return seed + 3; }
    std::uint64_t embed_svd_seed() const { return seed + 4; }
    std::uint64_t kmeans_seed() const { return seed + 5; }

    /// Throws std::invalid_argument on any range violation.
    void validate() const;
};

} // namespace sase
