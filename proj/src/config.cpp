#include "sase/config.hpp"

#include <cmath>
#include <stdexcept>

namespace sase {

void SaseConfig::validate() const {
    if (!adaptive && order < 0) throw std::invalid_argument("config: order must be >= 0");
    if (adaptive && max_order < 1) throw std::invalid_argument("config: max_order must be >= 1");
    if (!(alpha >= 0.0 && alpha <= 1.0))
        throw std::invalid_argument("config: alpha must lie in [0, 1]");
    if (dim < 1) throw std::invalid_argument("config: dim must be >= 1");
    if (reduce_dim < 0 || embed_dim < 0)
        throw std::invalid_argument("config: dimension overrides must be >= 0");
    if (rff_half_dim < 1) throw std::invalid_argument("config: rff_half_dim must be >= 1");
    if (sigma < 0.0 || !std::isfinite(sigma))
        throw std::invalid_argument("config: sigma must be >= 0 and finite");
    if (bandwidth_sample_cap < 2)
        throw std::invalid_argument("config: bandwidth_sample_cap must be >= 2");
    if (clusters < 1) throw std::invalid_argument("config: clusters must be >= 1");
    if (adaptive && clusters < 2)
        throw std::invalid_argument("config: adaptive mode requires clusters >= 2");
    if (kmeans_restarts < 1 || kmeans_max_iter < 1)
        throw std::invalid_argument("config: k-means restarts and max_iter must be >= 1");
}

} // namespace sase
