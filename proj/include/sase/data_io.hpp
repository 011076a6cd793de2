#pragma once

#include "sase/config.hpp"
#include "sase/graph_core.hpp"
#include "sase/selection.hpp"
#include "sase/spectral.hpp"

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>

namespace sase {

/// On-disk description of a graph bundle: a manifest.json next to an edge
/// list, a feature matrix (text or binary), and an optional label file.
struct GraphBundleManifest {
    std::int64_t n = 0;
    std::int64_t f = 0;
    int m_true = 0; // 0 = unknown
    std::string edges_file = "edges.tsv";
    std::string features_file;
    bool binary_features = true;
    std::string labels_file; // empty = no labels

    static GraphBundleManifest read(const std::filesystem::path& manifest_path);
    void write(const std::filesystem::path& manifest_path) const;
};

/// What ingestion cleaned up while building a valid bundle.
struct LoadReport {
    std::int64_t edge_lines = 0;
    std::int64_t self_loops_stripped = 0;
    std::int64_t duplicates_dropped = 0; // directed lines beyond the first per undirected edge
    std::int64_t undirected_edges = 0;
};

/// Loads a bundle directory; the result always satisfies GraphBundle
/// invariants (input is symmetrized, deduplicated, self-loop-stripped).
GraphBundle load_bundle(const std::filesystem::path& dir, LoadReport* report = nullptr);

void save_bundle(const GraphBundle& g, const std::filesystem::path& dir,
                 bool binary_features = true);

/// Planted-partition generator with cluster-correlated Gaussian features.
struct SbmSpec {
    std::int64_t n = 0;
    int m = 0;            // blocks
    double p_in = 0.0;    // intra-block edge probability
    double p_out = 0.0;   // inter-block edge probability
    std::int64_t f = 0;   // feature dimension
    double separation = 1.0; // pairwise centroid distance
    double noise = 1.0;      // per-coordinate feature noise
    std::uint64_t seed = 0;

    void validate() const;
};

GraphBundle generate_sbm(const SbmSpec& spec);

/// Metrics against ground truth, attached to result documents when labels
/// are available.
struct EvalMetrics {
    double acc = 0.0;
    double nmi = 0.0;
    double ari = 0.0;
};

/// Structured result document: config echo (with the resolved sigma),
/// selected order, metrics, timings, assignments. `method` labels which
/// clustering route produced the result ("sase", "sgc", "exact-sc").
void write_result(const ClusterResult& result, const SaseConfig& cfg,
                  const std::optional<EvalMetrics>& metrics,
                  const std::filesystem::path& path, const std::string& method = "sase");

/// Trace sidecar: CSV with columns k,s,delta,acc,nmi,ari,seconds.
void write_trace_csv(const AdaptiveTrace& trace, const std::filesystem::path& path);

std::vector<int> load_labels_file(const std::filesystem::path& path);

} // namespace sase
