#include "sase/kernel_rff.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <vector>

namespace sase {

double gaussian_kernel(const Eigen::Ref<const Eigen::RowVectorXd>& x,
                       const Eigen::Ref<const Eigen::RowVectorXd>& y, double sigma) {
    if (!(sigma > 0.0) || !std::isfinite(sigma))
        throw std::invalid_argument("gaussian_kernel: sigma must be positive and finite");
    if (x.size() != y.size())
        throw std::invalid_argument("gaussian_kernel: dimension mismatch");
    return std::exp(-(x - y).squaredNorm() / (2.0 * sigma * sigma));
}

double median_bandwidth(const Matrix& points, int sample_cap, std::uint64_t seed) {
    const std::int64_t n = points.rows();
    if (n < 2) throw std::invalid_argument("median_bandwidth: need at least 2 points");
    if (sample_cap < 2) throw std::invalid_argument("median_bandwidth: sample_cap must be >= 2");

    const std::int64_t take = std::min<std::int64_t>(n, sample_cap);
    std::vector<std::int64_t> idx(n);
    std::iota(idx.begin(), idx.end(), 0);

    // Partial Fisher-Yates: the first `take` slots become the sample.
    std::mt19937_64 rng(seed);
    for (std::int64_t i = 0; i < take; ++i) {
        std::uniform_int_distribution<std::int64_t> pick(i, n - 1);
        std::swap(idx[i], idx[pick(rng)]);
    }

    std::vector<double> dists;
    dists.reserve(static_cast<std::size_t>(take) * (take - 1) / 2);
    for (std::int64_t a = 0; a < take; ++a)
        for (std::int64_t b = a + 1; b < take; ++b)
            dists.push_back((points.row(idx[a]) - points.row(idx[b])).norm());

    if (std::all_of(dists.begin(), dists.end(), [](double d) { return d == 0.0; }))
        throw NumericalError("median_bandwidth: fewer than 2 distinct points in sample");

    std::sort(dists.begin(), dists.end());
    const std::size_t half = dists.size() / 2;
    const double median = (dists.size() % 2 == 1)
                              ? dists[half]
                              : 0.5 * (dists[half - 1] + dists[half]);
    return std::max(median, 1e-12);
}

RffProjector build_projector(int input_dim, int half_dim, double sigma, std::uint64_t seed,
                             FrequencyVariance mode) {
    if (input_dim < 1) throw std::invalid_argument("build_projector: input_dim must be >= 1");
    if (half_dim < 1) throw std::invalid_argument("build_projector: half_dim must be >= 1");
    if (!(sigma > 0.0) || !std::isfinite(sigma))
        throw std::invalid_argument("build_projector: sigma must be positive and finite");

    const double stddev = (mode == FrequencyVariance::KernelDual)
                              ? 1.0 / sigma
                              : 1.0 / std::sqrt(sigma);

    RffProjector p;
    p.bandwidth = sigma;
    p.half_dim = half_dim;
    p.seed = seed;
    p.variance_mode = mode;
    p.frequencies.resize(half_dim, input_dim);

    std::mt19937_64 rng(seed);
    std::normal_distribution<double> gauss(0.0, stddev);
    for (int i = 0; i < half_dim; ++i)
        for (int j = 0; j < input_dim; ++j) p.frequencies(i, j) = gauss(rng);
    return p;
}

Matrix project(const RffProjector& p, const Matrix& z) {
    if (z.cols() != p.frequencies.cols())
        throw NumericalError("project: input dimension does not match projector");
    const std::int64_t n = z.rows();
    const int half = p.half_dim;
    const double scale = 1.0 / std::sqrt(static_cast<double>(half));

    Matrix phases = z * p.frequencies.transpose(); // n x half
    Matrix out(n, 2 * half);
#pragma omp parallel for schedule(static)
    for (std::int64_t i = 0; i < n; ++i) {
        for (int j = 0; j < half; ++j) {
            out(i, j) = std::cos(phases(i, j)) * scale;
            out(i, half + j) = std::sin(phases(i, j)) * scale;
        }
    }
    return out;
}

} // namespace sase
