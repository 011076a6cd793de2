#pragma once

#include <Eigen/Dense>

#include <cstdint>
#include <vector>

namespace sase {

/// Joint count table of two labelings. Label ids are compacted independently,
/// so inputs may use arbitrary non-negative ids.
struct ContingencyTable {
    Eigen::Matrix<std::int64_t, Eigen::Dynamic, Eigen::Dynamic> counts; // pred x true
    std::int64_t total = 0;

    static ContingencyTable from_labels(const std::vector<int>& pred,
                                        const std::vector<int>& truth);
};

/// Fraction of nodes matched under the best injective cluster-to-class
/// mapping (Hungarian assignment on the contingency table).
double accuracy(const std::vector<int>& pred, const std::vector<int>& truth);

/// Normalized mutual information, arithmetic-mean normalization. Both sides
/// being a single cluster returns 1.0 by convention.
double nmi(const std::vector<int>& pred, const std::vector<int>& truth);

/// Adjusted Rand index. A vanishing adjustment denominator (both partitions
/// trivial) returns 1.0.
double ari(const std::vector<int>& pred, const std::vector<int>& truth);

} // namespace sase
