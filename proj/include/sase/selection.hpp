#pragma once

#include "sase/config.hpp"
#include "sase/graph_core.hpp"
#include "sase/spectral.hpp"
#include "sase/types.hpp"

#include <vector>

namespace sase {

/// Mean per-node ratio of intra-cluster centroid distance to
/// nearest-other-centroid distance. Lies in [0, 1] whenever assignments are
/// nearest-centroid consistent; smaller is better.
struct CriterionScore {
    double value = 0.0;
    std::vector<double> per_node_ratios; // filled only on request
};

CriterionScore criterion_score(const Matrix& embedding, const std::vector<int>& assignments,
                               const Matrix& centroids, bool keep_ratios = false);

struct OrderRecord {
    int order = 0;
    double score = 0.0;
    double delta = 0.0;          // s^(t-1) - s^(t); NaN for the first record
    double intra_distance = 0.0; // AGC-style criterion, for comparison only
    double acc = 0.0;            // NaN when the bundle has no labels
    double nmi = 0.0;
    double ari = 0.0;
    double seconds = 0.0;
};

struct AdaptiveTrace {
    std::vector<OrderRecord> records;
    int selected_order = 0;
    bool stopped_by_delta = false; // false: max_order cap reached
    ClusterResult selected_result;
};

/// The stopping rule applied to a score sequence s^(1), s^(2), ...: the order
/// before the first increase, or the last order when no increase occurs.
int selected_order_from_scores(const std::vector<double>& scores);

/// Runs the pipeline at k = 1, 2, ... (one sparse multiply per increment) and
/// stops at the first Delta = s^(t-1) - s^(t) < 0, returning the k = t-1
/// result. Hitting max_order without a negative Delta returns the last (by
/// then minimum-score) result with stopped_by_delta = false.
AdaptiveTrace adaptive_select(const GraphBundle& g, const SaseConfig& cfg);

} // namespace sase
