#pragma once

#include "sase/types.hpp"

#include <cstdint>
#include <vector>

namespace sase {

/// Immutable attributed graph: sparse symmetric adjacency in compressed-row
/// form, dense node features, optional ground-truth labels.
///
/// Invariants (checked by validate()):
///  - column indices sorted and strictly inside [0, n) within each row
///  - no stored self-loops, no duplicate entries, pattern symmetric
///  - features has exactly n rows and only finite entries
struct GraphBundle {
    std::int64_t n = 0;
    std::vector<std::int64_t> row_offsets; // size n + 1
    std::vector<std::int32_t> col_indices; // both (i,j) and (j,i) stored
    Matrix features;                       // n x f
    std::vector<int> labels;               // empty when absent, else length n in [0, num_classes)
    int num_classes = 0;

    bool has_labels() const { return !labels.empty(); }
    std::int64_t undirected_edge_count() const {
        return static_cast<std::int64_t>(col_indices.size()) / 2;
    }
    std::int64_t feature_dim() const { return features.cols(); }

    /// Throws DataError on any invariant violation.
    void validate() const;
};

/// S = D^{-1/2} (A + I) D^{-1/2} in the same compressed-row layout, with the
/// diagonal inserted. Entries lie in (0, 1]; S(i,i) = 1 / (deg_i + 1).
struct NormalizedAdjacency {
    std::int64_t n = 0;
    std::vector<std::int64_t> row_offsets;
    std::vector<std::int32_t> col_indices;
    std::vector<double> values;
};

struct SmoothedFeatures {
    int order = 0;
    Matrix matrix; // n x f
};

NormalizedAdjacency normalize_adjacency(const GraphBundle& g);

/// One application of S to a dense matrix. Per output row the accumulation
/// runs in ascending column-index order, so results are bit-reproducible.
Matrix propagate_once(const NormalizedAdjacency& s, const Matrix& m);

/// X^(k): k successive applications of S to the bundle features.
SmoothedFeatures smooth_features(const GraphBundle& g, int order);

/// alpha * x + (1 - alpha) * xk, elementwise. alpha must be in [0, 1].
Matrix fuse_features(const Matrix& x, const Matrix& xk, double alpha);

/// Divides every row by its L1 norm; all-zero rows are left untouched.
/// Optional preprocessing for bag-of-words style features.
Matrix l1_normalize_rows(const Matrix& m);

/// Incremental propagation state for order sweeps: holds the latest X^(k)
/// only, so advancing from k-1 to k costs a single sparse multiply.
class PropagationCache {
public:
    PropagationCache(const NormalizedAdjacency& s, Matrix base);

    /// Returns X^(order). Going backwards restarts from the base matrix.
    const Matrix& advance_to(int order);

    int order() const { return order_; }
    const Matrix& base() const { return base_; }
    std::int64_t rows() const { return base_.rows(); }

private:
    const NormalizedAdjacency* s_;
    Matrix base_;    // X^(0)
    Matrix current_; // X^(order_)
    int order_ = 0;
};

} // namespace sase
