#include "sase/graph_core.hpp"

#include <algorithm>
#include <cmath>

namespace sase {

void GraphBundle::validate() const {
    if (n <= 0) throw DataError("GraphBundle: node count must be positive");
    if (static_cast<std::int64_t>(row_offsets.size()) != n + 1)
        throw DataError("GraphBundle: row_offsets must have n+1 entries");
    if (row_offsets.front() != 0 ||
        row_offsets.back() != static_cast<std::int64_t>(col_indices.size()))
        throw DataError("GraphBundle: row_offsets do not bracket col_indices");
    for (std::int64_t i = 0; i < n; ++i) {
        if (row_offsets[i] > row_offsets[i + 1])
            throw DataError("GraphBundle: row_offsets not non-decreasing");
        for (std::int64_t p = row_offsets[i]; p < row_offsets[i + 1]; ++p) {
            const std::int32_t j = col_indices[p];
            if (j < 0 || j >= n) throw DataError("GraphBundle: column index out of range");
            if (j == i) throw DataError("GraphBundle: stored self-loop");
            if (p > row_offsets[i] && col_indices[p - 1] >= j)
                throw DataError("GraphBundle: columns not strictly ascending (duplicate entry?)");
        }
    }
    // Symmetry: (i,j) present implies (j,i) present.
    for (std::int64_t i = 0; i < n; ++i) {
        for (std::int64_t p = row_offsets[i]; p < row_offsets[i + 1]; ++p) {
            const std::int32_t j = col_indices[p];
            const auto begin = col_indices.begin() + row_offsets[j];
            const auto end = col_indices.begin() + row_offsets[j + 1];
            if (!std::binary_search(begin, end, static_cast<std::int32_t>(i)))
                throw DataError("GraphBundle: adjacency not symmetric");
        }
    }
    if (features.rows() != n)
        throw DataError("GraphBundle: feature matrix must have n rows");
    if (!features.allFinite())
        throw DataError("GraphBundle: non-finite feature entry");
    if (!labels.empty()) {
        if (static_cast<std::int64_t>(labels.size()) != n)
            throw DataError("GraphBundle: label vector must have n entries");
        for (int c : labels)
            if (c < 0 || c >= num_classes)
                throw DataError("GraphBundle: label id out of range");
    }
}

NormalizedAdjacency normalize_adjacency(const GraphBundle& g) {
    NormalizedAdjacency s;
    s.n = g.n;
    s.row_offsets.resize(g.n + 1);
    s.col_indices.reserve(g.col_indices.size() + g.n);
    s.values.reserve(g.col_indices.size() + g.n);

    // deg_hat(i) = deg(i) + 1 accounts for the inserted self-loop.
    std::vector<double> inv_sqrt_deg(g.n);
    for (std::int64_t i = 0; i < g.n; ++i) {
        const double deg_hat = static_cast<double>(g.row_offsets[i + 1] - g.row_offsets[i]) + 1.0;
        inv_sqrt_deg[i] = 1.0 / std::sqrt(deg_hat);
    }

    s.row_offsets[0] = 0;
    for (std::int64_t i = 0; i < g.n; ++i) {
        bool diag_placed = false;
        for (std::int64_t p = g.row_offsets[i]; p < g.row_offsets[i + 1]; ++p) {
            const std::int32_t j = g.col_indices[p];
            if (!diag_placed && j > i) {
                s.col_indices.push_back(static_cast<std::int32_t>(i));
                s.values.push_back(inv_sqrt_deg[i] * inv_sqrt_deg[i]);
                diag_placed = true;
            }
            s.col_indices.push_back(j);
            s.values.push_back(inv_sqrt_deg[i] * inv_sqrt_deg[j]);
        }
        if (!diag_placed) {
            s.col_indices.push_back(static_cast<std::int32_t>(i));
            s.values.push_back(inv_sqrt_deg[i] * inv_sqrt_deg[i]);
        }
        s.row_offsets[i + 1] = static_cast<std::int64_t>(s.col_indices.size());
    }
    return s;
}

Matrix propagate_once(const NormalizedAdjacency& s, const Matrix& m) {
    if (m.rows() != s.n)
        throw NumericalError("propagate_once: row count does not match graph size");
    Matrix out(m.rows(), m.cols());
    // Each output row accumulates in ascending column-index order; rows are
    // independent, so the result is bit-identical for any thread count.
#pragma omp parallel for schedule(static)
    for (std::int64_t i = 0; i < s.n; ++i) {
        auto row = out.row(i);
        row.setZero();
        for (std::int64_t p = s.row_offsets[i]; p < s.row_offsets[i + 1]; ++p)
            row += s.values[p] * m.row(s.col_indices[p]);
    }
    return out;
}

SmoothedFeatures smooth_features(const GraphBundle& g, int order) {
    if (order < 0) throw NumericalError("smooth_features: order must be non-negative");
    SmoothedFeatures result;
    result.order = order;
    if (order == 0) {
        result.matrix = g.features;
        return result;
    }
    const NormalizedAdjacency s = normalize_adjacency(g);
    Matrix x = g.features;
    for (int k = 0; k < order; ++k) x = propagate_once(s, x);
    result.matrix = std::move(x);
    return result;
}

Matrix fuse_features(const Matrix& x, const Matrix& xk, double alpha) {
    if (x.rows() != xk.rows() || x.cols() != xk.cols())
        throw NumericalError("fuse_features: shape mismatch");
    if (!(alpha >= 0.0 && alpha <= 1.0))
        throw std::invalid_argument("fuse_features: alpha must lie in [0, 1]");
    return alpha * x + (1.0 - alpha) * xk;
}

Matrix l1_normalize_rows(const Matrix& m) {
    Matrix out = m;
    for (std::int64_t i = 0; i < out.rows(); ++i) {
        const double norm = out.row(i).cwiseAbs().sum();
        if (norm > 0.0) out.row(i) /= norm;
    }
    return out;
}

PropagationCache::PropagationCache(const NormalizedAdjacency& s, Matrix base)
    : s_(&s), base_(std::move(base)), current_(base_), order_(0) {
    if (base_.rows() != s.n)
        throw NumericalError("PropagationCache: base row count does not match graph size");
}

const Matrix& PropagationCache::advance_to(int order) {
    if (order < 0) throw NumericalError("PropagationCache: order must be non-negative");
    if (order < order_) {
        current_ = base_;
        order_ = 0;
    }
    while (order_ < order) {
        current_ = propagate_once(*s_, current_);
        ++order_;
    }
    return current_;
}

} // namespace sase
