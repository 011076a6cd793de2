#include "sase/selection.hpp"

#include "sase/metrics.hpp"

#include <chrono>
#include <cmath>
#include <limits>

namespace sase {

CriterionScore criterion_score(const Matrix& embedding, const std::vector<int>& assignments,
                               const Matrix& centroids, bool keep_ratios) {
    const std::int64_t n = embedding.rows();
    const int m = static_cast<int>(centroids.rows());
    if (m < 2) throw std::invalid_argument("criterion_score: needs at least 2 centroids");
    if (static_cast<std::int64_t>(assignments.size()) != n)
        throw std::invalid_argument("criterion_score: assignment length mismatch");

    CriterionScore score;
    if (keep_ratios) score.per_node_ratios.reserve(n);

    double sum = 0.0;
    for (std::int64_t i = 0; i < n; ++i) {
        const int own = assignments[i];
        if (own < 0 || own >= m)
            throw std::invalid_argument("criterion_score: assignment id out of range");
        const double intra = (embedding.row(i) - centroids.row(own)).norm();
        double nearest_other = std::numeric_limits<double>::infinity();
        for (int c = 0; c < m; ++c) {
            if (c == own) continue;
            nearest_other = std::min(nearest_other,
                                     (embedding.row(i) - centroids.row(c)).norm());
        }
        double ratio;
        if (nearest_other == 0.0) {
            if (intra == 0.0)
                ratio = 1.0; // point sits on two coincident centroids
            else
                throw NumericalError("criterion_score: degenerate coincident centroids");
        } else {
            ratio = intra / nearest_other;
        }
        sum += ratio;
        if (keep_ratios) score.per_node_ratios.push_back(ratio);
    }
    score.value = sum / static_cast<double>(n);
    return score;
}

int selected_order_from_scores(const std::vector<double>& scores) {
    if (scores.empty()) throw std::invalid_argument("selected_order_from_scores: empty");
    for (std::size_t t = 1; t < scores.size(); ++t) {
        if (scores[t - 1] - scores[t] < 0.0) return static_cast<int>(t); // k = t-1, 1-based orders
    }
    return static_cast<int>(scores.size());
}

AdaptiveTrace adaptive_select(const GraphBundle& g, const SaseConfig& cfg) {
    cfg.validate();
    if (!cfg.adaptive)
        throw std::invalid_argument("adaptive_select: config is not in adaptive mode");

    const NormalizedAdjacency s = normalize_adjacency(g);
    PropagationCache cache(s, make_propagation_base(g, cfg));

    AdaptiveTrace trace;
    const double nan = std::numeric_limits<double>::quiet_NaN();
    ClusterResult previous;

    for (int k = 1; k <= cfg.max_order; ++k) {
        const auto start = std::chrono::steady_clock::now();
        ClusterResult current = sase_cluster_once(cfg, cache, k);
        const double seconds =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();

        OrderRecord record;
        record.order = k;
        record.score = current.criterion;
        record.delta = k == 1 ? nan : previous.criterion - current.criterion;
        record.intra_distance = current.intra_distance;
        record.seconds = seconds;
        if (g.has_labels()) {
            record.acc = accuracy(current.assignments, g.labels);
            record.nmi = nmi(current.assignments, g.labels);
            record.ari = ari(current.assignments, g.labels);
        } else {
            record.acc = record.nmi = record.ari = nan;
        }
        trace.records.push_back(record);

        if (k > 1 && record.delta < 0.0) {
            trace.selected_order = k - 1;
            trace.stopped_by_delta = true;
            trace.selected_result = std::move(previous);
            return trace;
        }
        previous = std::move(current);
    }

    // Cap reached without a negative Delta: scores were non-increasing, so the
    // last result carries the minimum score.
    trace.selected_order = cfg.max_order;
    trace.stopped_by_delta = false;
    trace.selected_result = std::move(previous);
    return trace;
}

} // namespace sase
