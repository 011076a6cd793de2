#pragma once

#include "sase/types.hpp"

#include <cstdint>

namespace sase {

/// How the random frequencies are distributed. The Gaussian kernel
/// exp(-||x-y||^2 / (2 sigma^2)) has the exact Fourier dual N(0, I/sigma^2)
/// (KernelDual, the default). LiteralInverseSigma draws from N(0, I/sigma)
/// instead; it is kept selectable because both conventions appear in use.
enum class FrequencyVariance {
    KernelDual,         // per-coordinate variance 1/sigma^2
    LiteralInverseSigma // per-coordinate variance 1/sigma
};

enum class KernelKind { Gaussian };

/// Extension seam for alternative shift-invariant kernels. Only the Gaussian
/// variant is implemented.
struct KernelSpec {
    KernelKind kind = KernelKind::Gaussian;
    double bandwidth = 1.0; // sigma > 0
};

/// Frozen random frequency matrix defining the explicit kernel-space map phi.
/// Output dimension of the map is exactly 2 * half_dim.
struct RffProjector {
    Matrix frequencies; // half_dim x input_dim
    double bandwidth = 0.0;
    int half_dim = 0;
    std::uint64_t seed = 0;
    FrequencyVariance variance_mode = FrequencyVariance::KernelDual;

    int output_dim() const { return 2 * half_dim; }
    int input_dim() const { return static_cast<int>(frequencies.cols()); }
};

/// Exact Gaussian kernel; serves as the oracle the RFF approximation is
/// tested against.
double gaussian_kernel(const Eigen::Ref<const Eigen::RowVectorXd>& x,
                       const Eigen::Ref<const Eigen::RowVectorXd>& y, double sigma);

/// Median pairwise Euclidean distance over a seeded sample of at most
/// sample_cap points, clamped below at 1e-12. Throws NumericalError when the
/// sampled points admit no positive distance.
double median_bandwidth(const Matrix& points, int sample_cap, std::uint64_t seed);

RffProjector build_projector(int input_dim, int half_dim, double sigma, std::uint64_t seed,
                             FrequencyVariance mode = FrequencyVariance::KernelDual);

/// Row i of the result is phi(z_i) =
///   [cos(w_1.z), ..., cos(w_D.z), sin(w_1.z), ..., sin(w_D.z)] / sqrt(D).
/// Every row has unit Euclidean norm up to rounding.
Matrix project(const RffProjector& p, const Matrix& z);

} // namespace sase
