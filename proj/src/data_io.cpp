#include "sase/data_io.hpp"

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <cstring>
#include <fstream>
#include <random>
#include <sstream>

namespace sase {

namespace {

using nlohmann::ordered_json;

constexpr char kFeatureMagic[8] = {'S', 'A', 'S', 'E', 'F', 'M', 'A', 'T'};
constexpr std::uint8_t kFeatureVersion = 1;

[[noreturn]] void fail(const std::filesystem::path& file, std::int64_t line,
                       const std::string& what) {
    throw DataError(file.string() + ":" + std::to_string(line) + ": " + what);
}

[[noreturn]] void fail(const std::filesystem::path& file, const std::string& what) {
    throw DataError(file.string() + ": " + what);
}

std::ifstream open_text(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) fail(path, "cannot open file");
    return in;
}

bool is_comment_or_blank(const std::string& line) {
    for (char c : line) {
        if (c == '#') return true;
        if (!std::isspace(static_cast<unsigned char>(c))) return false;
    }
    return true;
}

// Canonicalized (u < v) pair list -> sorted unique undirected CSR with both
// directions stored.
void build_adjacency(std::vector<std::pair<std::int32_t, std::int32_t>>& pairs,
                     std::int64_t n, GraphBundle& g, LoadReport& report) {
    std::vector<std::pair<std::int32_t, std::int32_t>> arcs;
    arcs.reserve(pairs.size() * 2);
    for (auto [u, v] : pairs) {
        arcs.emplace_back(u, v);
        arcs.emplace_back(v, u);
    }
    std::sort(arcs.begin(), arcs.end());
    arcs.erase(std::unique(arcs.begin(), arcs.end()), arcs.end());

    report.undirected_edges = static_cast<std::int64_t>(arcs.size()) / 2;
    report.duplicates_dropped =
        static_cast<std::int64_t>(pairs.size()) - report.undirected_edges;

    g.row_offsets.assign(n + 1, 0);
    g.col_indices.resize(arcs.size());
    for (auto [u, v] : arcs) ++g.row_offsets[u + 1];
    for (std::int64_t i = 0; i < n; ++i) g.row_offsets[i + 1] += g.row_offsets[i];
    std::vector<std::int64_t> cursor(g.row_offsets.begin(), g.row_offsets.end() - 1);
    for (auto [u, v] : arcs) g.col_indices[cursor[u]++] = v;
}

std::vector<std::pair<std::int32_t, std::int32_t>> read_edges(
    const std::filesystem::path& path, std::int64_t n, LoadReport& report) {
    std::ifstream in = open_text(path);
    std::vector<std::pair<std::int32_t, std::int32_t>> directed;
    std::string line;
    std::int64_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (is_comment_or_blank(line)) continue;
        std::istringstream ss(line);
        std::int64_t u, v;
        if (!(ss >> u >> v)) fail(path, line_no, "expected two integers");
        if (u < 0 || u >= n || v < 0 || v >= n)
            fail(path, line_no, "node index out of range [0, n)");
        ++report.edge_lines;
        if (u == v) {
            ++report.self_loops_stripped;
            continue;
        }
        if (u > v) std::swap(u, v);
        directed.emplace_back(static_cast<std::int32_t>(u), static_cast<std::int32_t>(v));
    }
    return directed;
}

Matrix read_features_text(const std::filesystem::path& path, std::int64_t n, std::int64_t f) {
    std::ifstream in = open_text(path);
    Matrix features(n, f);
    std::string line;
    std::int64_t line_no = 0;
    std::int64_t row = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (is_comment_or_blank(line)) continue;
        if (row >= n) fail(path, line_no, "more feature rows than declared n");
        for (char& c : line)
            if (c == ',') c = ' ';
        std::istringstream ss(line);
        double value;
        std::int64_t col = 0;
        while (ss >> value) {
            if (col >= f) fail(path, line_no, "row has more than f=" + std::to_string(f) + " columns");
            if (!std::isfinite(value)) fail(path, line_no, "non-finite feature value");
            features(row, col++) = value;
        }
        if (!ss.eof()) fail(path, line_no, "unparseable feature value");
        if (col != f)
            fail(path, line_no, "row has " + std::to_string(col) + " columns, expected " +
                                    std::to_string(f));
        ++row;
    }
    if (row != n)
        fail(path, "feature file has " + std::to_string(row) + " rows, manifest declares n=" +
                       std::to_string(n));
    return features;
}

Matrix read_features_binary(const std::filesystem::path& path, std::int64_t n, std::int64_t f) {
    std::ifstream in(path, std::ios::binary);
    if (!in) fail(path, "cannot open file");

    char magic[8];
    std::uint8_t version = 0;
    std::uint64_t file_n = 0, file_f = 0;
    in.read(magic, sizeof(magic));
    in.read(reinterpret_cast<char*>(&version), 1);
    in.read(reinterpret_cast<char*>(&file_n), sizeof(file_n));
    in.read(reinterpret_cast<char*>(&file_f), sizeof(file_f));
    if (!in || std::memcmp(magic, kFeatureMagic, sizeof(magic)) != 0)
        fail(path, "not a SASEFMAT feature file");
    if (version != kFeatureVersion)
        fail(path, "unsupported feature file version " + std::to_string(version));
    if (static_cast<std::int64_t>(file_n) != n || static_cast<std::int64_t>(file_f) != f)
        fail(path, "feature file declares " + std::to_string(file_n) + "x" +
                       std::to_string(file_f) + ", manifest declares " + std::to_string(n) + "x" +
                       std::to_string(f));

    Matrix features(n, f);
    in.read(reinterpret_cast<char*>(features.data()),
            static_cast<std::streamsize>(sizeof(double) * n * f));
    if (!in) fail(path, "truncated feature payload");
    if (!features.allFinite()) fail(path, "non-finite feature value");
    return features;
}

} // namespace

GraphBundleManifest GraphBundleManifest::read(const std::filesystem::path& manifest_path) {
    std::ifstream in = open_text(manifest_path);
    ordered_json doc;
    try {
        in >> doc;
    } catch (const nlohmann::json::exception& e) {
        fail(manifest_path, std::string("invalid JSON: ") + e.what());
    }
    GraphBundleManifest m;
    try {
        m.n = doc.at("n").get<std::int64_t>();
        m.f = doc.at("f").get<std::int64_t>();
        m.m_true = doc.value("m_true", 0);
        m.edges_file = doc.at("edges").get<std::string>();
        m.features_file = doc.at("features").get<std::string>();
        const std::string kind = doc.value("features_kind", "binary");
        if (kind != "binary" && kind != "text")
            fail(manifest_path, "features_kind must be \"binary\" or \"text\"");
        m.binary_features = kind == "binary";
        m.labels_file = doc.value("labels", "");
    } catch (const nlohmann::json::exception& e) {
        fail(manifest_path, std::string("missing or mistyped key: ") + e.what());
    }
    if (m.n <= 0 || m.f < 0) fail(manifest_path, "n must be positive and f non-negative");
    return m;
}

void GraphBundleManifest::write(const std::filesystem::path& manifest_path) const {
    ordered_json doc;
    doc["n"] = n;
    doc["f"] = f;
    if (m_true > 0) doc["m_true"] = m_true;
    doc["edges"] = edges_file;
    doc["features"] = features_file;
    doc["features_kind"] = binary_features ? "binary" : "text";
    if (!labels_file.empty()) doc["labels"] = labels_file;
    std::ofstream out(manifest_path);
    if (!out) fail(manifest_path, "cannot open for writing");
    out << doc.dump(2) << "\n";
}

std::vector<int> load_labels_file(const std::filesystem::path& path) {
    std::ifstream in = open_text(path);
    std::vector<int> raw;
    std::string line;
    std::int64_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (is_comment_or_blank(line)) continue;
        std::int64_t value;
        std::istringstream ss(line);
        if (!(ss >> value)) fail(path, line_no, "expected one integer");
        raw.push_back(static_cast<int>(value));
    }
    return raw;
}

GraphBundle load_bundle(const std::filesystem::path& dir, LoadReport* report) {
    const GraphBundleManifest manifest = GraphBundleManifest::read(dir / "manifest.json");

    GraphBundle g;
    g.n = manifest.n;
    LoadReport local;
    auto directed = read_edges(dir / manifest.edges_file, manifest.n, local);
    build_adjacency(directed, manifest.n, g, local);

    g.features = manifest.binary_features
                     ? read_features_binary(dir / manifest.features_file, manifest.n, manifest.f)
                     : read_features_text(dir / manifest.features_file, manifest.n, manifest.f);

    if (!manifest.labels_file.empty()) {
        const auto path = dir / manifest.labels_file;
        std::vector<int> raw = load_labels_file(path);
        if (static_cast<std::int64_t>(raw.size()) != manifest.n)
            fail(path, "label file has " + std::to_string(raw.size()) +
                           " entries, manifest declares n=" + std::to_string(manifest.n));
        // Ids need not be contiguous; remap in sorted order.
        std::vector<int> sorted = raw;
        std::sort(sorted.begin(), sorted.end());
        sorted.erase(std::unique(sorted.begin(), sorted.end()), sorted.end());
        g.labels.resize(raw.size());
        for (std::size_t i = 0; i < raw.size(); ++i)
            g.labels[i] = static_cast<int>(
                std::lower_bound(sorted.begin(), sorted.end(), raw[i]) - sorted.begin());
        g.num_classes = static_cast<int>(sorted.size());
    }

    g.validate();
    if (report) *report = local;
    return g;
}

void save_bundle(const GraphBundle& g, const std::filesystem::path& dir, bool binary_features) {
    std::filesystem::create_directories(dir);

    GraphBundleManifest manifest;
    manifest.n = g.n;
    manifest.f = g.features.cols();
    manifest.m_true = g.num_classes;
    manifest.edges_file = "edges.tsv";
    manifest.features_file = binary_features ? "features.bin" : "features.csv";
    manifest.binary_features = binary_features;
    manifest.labels_file = g.has_labels() ? "labels.txt" : "";
    manifest.write(dir / "manifest.json");

    {
        std::ofstream out(dir / manifest.edges_file);
        if (!out) fail(dir / manifest.edges_file, "cannot open for writing");
        for (std::int64_t i = 0; i < g.n; ++i)
            for (std::int64_t p = g.row_offsets[i]; p < g.row_offsets[i + 1]; ++p)
                if (i < g.col_indices[p]) out << i << "\t" << g.col_indices[p] << "\n";
    }

    const auto feature_path = dir / manifest.features_file;
    if (binary_features) {
        std::ofstream out(feature_path, std::ios::binary);
        if (!out) fail(feature_path, "cannot open for writing");
        out.write(kFeatureMagic, sizeof(kFeatureMagic));
        out.write(reinterpret_cast<const char*>(&kFeatureVersion), 1);
        const std::uint64_t n = static_cast<std::uint64_t>(g.n);
        const std::uint64_t f = static_cast<std::uint64_t>(g.features.cols());
        out.write(reinterpret_cast<const char*>(&n), sizeof(n));
        out.write(reinterpret_cast<const char*>(&f), sizeof(f));
        out.write(reinterpret_cast<const char*>(g.features.data()),
                  static_cast<std::streamsize>(sizeof(double) * g.n * g.features.cols()));
    } else {
        std::ofstream out(feature_path);
        if (!out) fail(feature_path, "cannot open for writing");
        out.precision(17);
        for (std::int64_t i = 0; i < g.n; ++i) {
            for (std::int64_t j = 0; j < g.features.cols(); ++j) {
                if (j) out << ",";
                out << g.features(i, j);
            }
            out << "\n";
        }
    }

    if (g.has_labels()) {
        std::ofstream out(dir / manifest.labels_file);
        if (!out) fail(dir / manifest.labels_file, "cannot open for writing");
        for (int label : g.labels) out << label << "\n";
    }
}

void SbmSpec::validate() const {
    if (n <= 0) throw std::invalid_argument("sbm: n must be positive");
    if (m < 1 || m > n) throw std::invalid_argument("sbm: block count out of range");
    if (!(p_out >= 0.0 && p_out <= p_in && p_in <= 1.0))
        throw std::invalid_argument("sbm: need 0 <= p_out <= p_in <= 1");
    if (f < 1) throw std::invalid_argument("sbm: feature dim must be >= 1");
    if (noise < 0.0 || separation < 0.0)
        throw std::invalid_argument("sbm: separation and noise must be >= 0");
}

namespace {

// Geometric skipping over a run of candidate pairs: each visited index is an
// edge; expected cost is proportional to the edge count, not the pair count.
template <typename Fn>
void sample_run(std::int64_t length, double p, std::mt19937_64& rng, Fn&& emit) {
    if (length <= 0 || p <= 0.0) return;
    if (p >= 1.0) {
        for (std::int64_t i = 0; i < length; ++i) emit(i);
        return;
    }
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    const double log1mp = std::log1p(-p);
    std::int64_t i = -1;
    while (true) {
        const double u = unit(rng);
        const double skip = std::floor(std::log1p(-u) / log1mp);
        if (skip > static_cast<double>(length)) return; // avoids int64 overflow on tiny p
        i += 1 + static_cast<std::int64_t>(skip);
        if (i >= length) return;
        emit(i);
    }
}

} // namespace

GraphBundle generate_sbm(const SbmSpec& spec) {
    spec.validate();
    std::mt19937_64 rng(spec.seed);

    // Balanced blocks: the first n % m blocks take the extra node.
    const std::int64_t base = spec.n / spec.m;
    const std::int64_t extra = spec.n % spec.m;
    std::vector<std::int64_t> block_start(spec.m + 1, 0);
    for (int b = 0; b < spec.m; ++b)
        block_start[b + 1] = block_start[b] + base + (b < extra ? 1 : 0);

    GraphBundle g;
    g.n = spec.n;
    g.labels.resize(spec.n);
    g.num_classes = spec.m;
    for (int b = 0; b < spec.m; ++b)
        for (std::int64_t i = block_start[b]; i < block_start[b + 1]; ++i) g.labels[i] = b;

    std::vector<std::pair<std::int32_t, std::int32_t>> edges;
    for (std::int64_t i = 0; i < spec.n; ++i) {
        const int b = g.labels[i];
        // Within-block tail of row i.
        sample_run(block_start[b + 1] - (i + 1), spec.p_in, rng, [&](std::int64_t off) {
            edges.emplace_back(static_cast<std::int32_t>(i),
                               static_cast<std::int32_t>(i + 1 + off));
        });
        // All later blocks at once (contiguous by construction).
        sample_run(spec.n - block_start[b + 1], spec.p_out, rng, [&](std::int64_t off) {
            edges.emplace_back(static_cast<std::int32_t>(i),
                               static_cast<std::int32_t>(block_start[b + 1] + off));
        });
    }

    LoadReport unused;
    build_adjacency(edges, spec.n, g, unused);

    // Block centroids sit on scaled coordinate axes: pairwise distance is
    // exactly `separation` when f >= m, approximately otherwise.
    std::normal_distribution<double> gauss(0.0, 1.0);
    const double radius = spec.separation / std::sqrt(2.0);
    Matrix centroids = Matrix::Zero(spec.m, spec.f);
    if (spec.f >= spec.m) {
        for (int b = 0; b < spec.m; ++b) centroids(b, b) = radius;
    } else {
        for (int b = 0; b < spec.m; ++b) {
            for (std::int64_t j = 0; j < spec.f; ++j) centroids(b, j) = gauss(rng);
            centroids.row(b) *= radius / centroids.row(b).norm();
        }
    }

    g.features.resize(spec.n, spec.f);
    for (std::int64_t i = 0; i < spec.n; ++i)
        for (std::int64_t j = 0; j < spec.f; ++j)
            g.features(i, j) = centroids(g.labels[i], j) + spec.noise * gauss(rng);

    g.validate();
    return g;
}

namespace {

ordered_json config_json(const SaseConfig& cfg, double resolved_sigma) {
    ordered_json c;
    c["adaptive"] = cfg.adaptive;
    if (cfg.adaptive)
        c["max_order"] = cfg.max_order;
    else
        c["order"] = cfg.order;
    c["alpha"] = cfg.alpha;
    c["dim"] = cfg.dim;
    c["reduce_dim"] = cfg.resolved_reduce_dim();
    c["embed_dim"] = cfg.resolved_embed_dim();
    c["rff_half_dim"] = cfg.rff_half_dim;
    c["sigma"] = cfg.sigma;
    c["resolved_sigma"] = resolved_sigma;
    c["rff_variance"] =
        cfg.rff_variance == FrequencyVariance::KernelDual ? "dual" : "literal";
    c["bandwidth_sample_cap"] = cfg.bandwidth_sample_cap;
    c["clusters"] = cfg.clusters;
    c["seed"] = cfg.seed;
    c["kmeans_restarts"] = cfg.kmeans_restarts;
    c["kmeans_max_iter"] = cfg.kmeans_max_iter;
    c["normalize_features"] = cfg.normalize_features;
    return c;
}

ordered_json json_or_null(double v) {
    if (std::isfinite(v)) return v;
    return nullptr;
}

} // namespace

void write_result(const ClusterResult& result, const SaseConfig& cfg,
                  const std::optional<EvalMetrics>& metrics,
                  const std::filesystem::path& path, const std::string& method) {
    ordered_json doc;
    doc["method"] = method;
    doc["config"] = config_json(cfg, result.resolved_sigma);
    doc["selected_order"] = result.order;

    ordered_json metric_block;
    metric_block["criterion"] = json_or_null(result.criterion);
    metric_block["intra_distance"] = json_or_null(result.intra_distance);
    metric_block["inertia"] = json_or_null(result.inertia);
    if (metrics) {
        metric_block["acc"] = metrics->acc;
        metric_block["nmi"] = metrics->nmi;
        metric_block["ari"] = metrics->ari;
    }
    doc["metrics"] = metric_block;

    ordered_json timing_block;
    timing_block["smooth"] = result.timings.smooth;
    timing_block["fuse"] = result.timings.fuse;
    timing_block["reduce"] = result.timings.reduce;
    timing_block["bandwidth"] = result.timings.bandwidth;
    timing_block["project"] = result.timings.project;
    timing_block["embed"] = result.timings.embed;
    timing_block["cluster"] = result.timings.cluster;
    timing_block["score"] = result.timings.score;
    timing_block["total"] = result.timings.total;
    doc["timings"] = timing_block;

    doc["kmeans_iterations"] = result.kmeans_iterations;
    doc["embedding_zero_rows"] = result.embedding_zero_rows;
    doc["assignments"] = result.assignments;

    std::ofstream out(path);
    if (!out) fail(path, "cannot open for writing");
    out << doc.dump(2) << "\n";
}

void write_trace_csv(const AdaptiveTrace& trace, const std::filesystem::path& path) {
    std::ofstream out(path);
    if (!out) fail(path, "cannot open for writing");
    out.precision(10);
    out << "k,s,delta,acc,nmi,ari,seconds\n";
    for (const OrderRecord& r : trace.records) {
        out << r.order << "," << r.score << "," << r.delta << "," << r.acc << "," << r.nmi << ","
            << r.ari << "," << r.seconds << "\n";
    }
}

} // namespace sase
