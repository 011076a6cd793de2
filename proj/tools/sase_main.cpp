// Command-line front end: cluster (fixed or adaptive order), parameter
// sweeps, scaling benchmarks, label evaluation, synthetic generation.

#include "sase/data_io.hpp"
#include "sase/metrics.hpp"
#include "sase/selection.hpp"
#include "sase/spectral.hpp"

#include <CLI11.hpp>

#include <chrono>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

namespace {

// Exit codes are a stable scripting contract.
constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitData = 2;
constexpr int kExitNumerical = 3;

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
    return std::chrono::duration<double>(Clock::now() - start).count();
}

struct CommonOptions {
    sase::SaseConfig cfg;
    std::string rff_variance = "dual";
};

void add_config_flags(CLI::App& cmd, CommonOptions& opts) {
    cmd.add_option("--order", opts.cfg.order, "Fixed convolution order k");
    cmd.add_flag("--adaptive", opts.cfg.adaptive, "Select the order adaptively");
    cmd.add_option("--max-order", opts.cfg.max_order, "Adaptive-mode order cap");
    cmd.add_option("--alpha", opts.cfg.alpha, "Weight of the original features, in [0,1]");
    cmd.add_option("--dim", opts.cfg.dim, "Reduced dimensionality / embedding width d");
    cmd.add_option("--reduce-dim", opts.cfg.reduce_dim, "Override the T-SVD reduction rank");
    cmd.add_option("--embed-dim", opts.cfg.embed_dim, "Override the spectral embedding width");
    cmd.add_option("--rff-dim", opts.cfg.rff_half_dim,
                   "Half projection dimension D (output is 2D)");
    cmd.add_option("--sigma", opts.cfg.sigma, "Gaussian bandwidth (0 = median heuristic)");
    cmd.add_option("--rff-variance", opts.rff_variance,
                   "Frequency law: dual (1/sigma^2) or literal (1/sigma)")
        ->check(CLI::IsMember({"dual", "literal"}));
    cmd.add_option("--clusters", opts.cfg.clusters, "Number of clusters m");
    cmd.add_option("--seed", opts.cfg.seed, "Master RNG seed");
    cmd.add_option("--restarts", opts.cfg.kmeans_restarts, "k-means restarts");
    cmd.add_option("--kmeans-max-iter", opts.cfg.kmeans_max_iter, "k-means iteration cap");
    cmd.add_flag("--normalize-features", opts.cfg.normalize_features,
                 "Row-L1 normalize features before smoothing");
}

sase::SaseConfig resolve_config(const CommonOptions& opts) {
    sase::SaseConfig cfg = opts.cfg;
    cfg.rff_variance = opts.rff_variance == "literal"
                           ? sase::FrequencyVariance::LiteralInverseSigma
                           : sase::FrequencyVariance::KernelDual;
    cfg.validate();
    return cfg;
}

std::optional<sase::EvalMetrics> evaluate(const sase::GraphBundle& g,
                                          const std::vector<int>& assignments) {
    if (!g.has_labels()) return std::nullopt;
    sase::EvalMetrics m;
    m.acc = sase::accuracy(assignments, g.labels);
    m.nmi = sase::nmi(assignments, g.labels);
    m.ari = sase::ari(assignments, g.labels);
    return m;
}

void print_metrics(const std::optional<sase::EvalMetrics>& m) {
    if (!m) return;
    std::cout << "acc=" << m->acc << " nmi=" << m->nmi << " ari=" << m->ari << "\n";
}

std::vector<int> parse_int_list(const std::string& text) {
    std::vector<int> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        const auto colon = item.find(':');
        if (colon != std::string::npos) {
            const int lo = std::stoi(item.substr(0, colon));
            const int hi = std::stoi(item.substr(colon + 1));
            for (int v = lo; v <= hi; ++v) out.push_back(v);
        } else if (!item.empty()) {
            out.push_back(std::stoi(item));
        }
    }
    return out;
}

std::vector<double> parse_double_list(const std::string& text) {
    std::vector<double> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ','))
        if (!item.empty()) out.push_back(std::stod(item));
    return out;
}

// Peak resident set from the kernel, in bytes; 0 when unavailable.
std::int64_t peak_rss_bytes() {
    std::ifstream status("/proc/self/status");
    std::string line;
    while (std::getline(status, line)) {
        if (line.rfind("VmHWM:", 0) == 0) {
            std::istringstream ss(line.substr(6));
            std::int64_t kib = 0;
            ss >> kib;
            return kib * 1024;
        }
    }
    return 0;
}

// Reference path kept in scope for comparisons: k-means straight on the
// k-order smoothed features, no fusion, no spectral step.
sase::ClusterResult sgc_kmeans_baseline(const sase::GraphBundle& g, const sase::SaseConfig& cfg) {
    sase::ClusterResult result;
    result.order = cfg.order;
    const auto start = Clock::now();
    const sase::SmoothedFeatures smoothed = sase::smooth_features(g, cfg.order);
    sase::KmeansOptions opts;
    opts.max_iter = cfg.kmeans_max_iter;
    opts.restarts = cfg.kmeans_restarts;
    sase::KmeansResult km =
        sase::kmeans(smoothed.matrix, cfg.clusters, cfg.kmeans_seed(), opts);
    result.assignments = std::move(km.assignments);
    result.centroids = std::move(km.centroids);
    result.inertia = km.inertia;
    result.kmeans_iterations = km.iterations_run;
    result.criterion = std::nan("");
    result.intra_distance = std::nan("");
    result.timings.total = seconds_since(start);
    return result;
}

// Classical dense spectral clustering on the reduced fused features; carries
// the library's n <= 5000 guard.
sase::ClusterResult exact_sc_baseline(const sase::GraphBundle& g, const sase::SaseConfig& cfg) {
    sase::ClusterResult result;
    result.order = cfg.order;
    const auto start = Clock::now();
    const sase::SmoothedFeatures smoothed = sase::smooth_features(g, cfg.order);
    const sase::Matrix fused =
        sase::fuse_features(sase::make_propagation_base(g, cfg), smoothed.matrix, cfg.alpha);
    const int rank = static_cast<int>(std::min<std::int64_t>(
        cfg.resolved_reduce_dim(), std::min(fused.rows(), fused.cols())));
    const sase::TruncatedSvdResult svd = sase::truncated_svd(fused, rank, cfg.reduce_svd_seed());
    const sase::Matrix z = svd.left_vectors * svd.singular_values.asDiagonal();
    result.resolved_sigma =
        cfg.sigma > 0.0 ? cfg.sigma
                        : sase::median_bandwidth(z, cfg.bandwidth_sample_cap, cfg.bandwidth_seed());
    result.assignments =
        sase::exact_spectral_cluster(z, cfg.clusters, result.resolved_sigma, cfg.kmeans_seed());
    result.criterion = std::nan("");
    result.intra_distance = std::nan("");
    result.inertia = std::nan("");
    result.timings.total = seconds_since(start);
    return result;
}

int cmd_cluster(const std::string& bundle_dir, const std::string& out_path,
                const std::string& method, const CommonOptions& opts) {
    const sase::SaseConfig cfg = resolve_config(opts);
    if (method != "sase" && cfg.adaptive)
        throw std::invalid_argument("cluster: --adaptive applies to the sase method only");
    sase::LoadReport report;
    const sase::GraphBundle g = sase::load_bundle(bundle_dir, &report);
    std::cerr << "loaded n=" << g.n << " edges=" << g.undirected_edge_count()
              << " f=" << g.feature_dim() << " (dropped " << report.duplicates_dropped
              << " duplicates, " << report.self_loops_stripped << " self-loops)\n";

    sase::ClusterResult result;
    std::optional<sase::AdaptiveTrace> trace;
    if (method == "sgc") {
        result = sgc_kmeans_baseline(g, cfg);
    } else if (method == "exact-sc") {
        result = exact_sc_baseline(g, cfg);
    } else if (cfg.adaptive) {
        trace = sase::adaptive_select(g, cfg);
        result = trace->selected_result;
        std::cerr << "selected order k=" << trace->selected_order
                  << (trace->stopped_by_delta ? " (delta rule)" : " (order cap)") << "\n";
    } else {
        result = sase::sase_cluster_once(g, cfg, cfg.order);
    }

    const auto metrics = evaluate(g, result.assignments);
    if (!out_path.empty()) {
        sase::write_result(result, cfg, metrics, out_path, method);
        if (trace) sase::write_trace_csv(*trace, out_path + ".trace.csv");
    }
    std::cout << "order=" << result.order << " criterion=" << result.criterion
              << " sigma=" << result.resolved_sigma << "\n";
    print_metrics(metrics);
    return kExitOk;
}

int cmd_sweep(const std::string& bundle_dir, const std::string& out_csv,
              const std::string& alphas_text, const std::string& orders_text,
              const CommonOptions& opts) {
    sase::SaseConfig cfg = resolve_config(opts);
    const sase::GraphBundle g = sase::load_bundle(bundle_dir);

    std::vector<double> alphas =
        alphas_text.empty() ? std::vector<double>{cfg.alpha} : parse_double_list(alphas_text);
    std::vector<int> orders =
        orders_text.empty() ? std::vector<int>{cfg.order} : parse_int_list(orders_text);
    std::sort(orders.begin(), orders.end()); // ascending: one propagation per increment

    std::ofstream out(out_csv);
    if (!out) throw sase::DataError(out_csv + ": cannot open for writing");
    out.precision(10);
    out << "alpha,k,s,acc,nmi,ari,seconds\n";

    const sase::NormalizedAdjacency s = sase::normalize_adjacency(g);
    sase::PropagationCache cache(s, sase::make_propagation_base(g, cfg));
    for (int k : orders) {
        for (double alpha : alphas) {
            sase::SaseConfig run_cfg = cfg;
            run_cfg.alpha = alpha;
            run_cfg.order = k;
            run_cfg.validate();
            const auto start = Clock::now();
            const sase::ClusterResult result = sase::sase_cluster_once(run_cfg, cache, k);
            const double seconds = seconds_since(start);
            const auto metrics = evaluate(g, result.assignments);
            out << alpha << "," << k << "," << result.criterion << ","
                << (metrics ? metrics->acc : std::nan("")) << ","
                << (metrics ? metrics->nmi : std::nan("")) << ","
                << (metrics ? metrics->ari : std::nan("")) << "," << seconds << "\n";
        }
    }
    std::cout << "wrote " << out_csv << " (" << orders.size() * alphas.size() << " rows)\n";
    return kExitOk;
}

int cmd_bench(const std::string& sizes_text, const std::string& out_csv, int avg_degree,
              std::int64_t feat_dim, double separation, double noise, int repeats,
              const CommonOptions& opts) {
    sase::SaseConfig cfg = resolve_config(opts);
    const std::vector<int> sizes = parse_int_list(sizes_text);
    if (sizes.empty()) throw std::invalid_argument("bench: no sizes given");
    if (repeats < 1) throw std::invalid_argument("bench: repeats must be >= 1");

    std::ofstream out(out_csv);
    if (!out) throw sase::DataError(out_csv + ": cannot open for writing");
    out.precision(10);
    out << "n,edges,gen_seconds,pipeline_seconds,smooth,fuse,reduce,bandwidth,project,embed,"
           "cluster,score,ari,peak_rss_bytes,mem_source\n";

    for (int n : sizes) {
        sase::SbmSpec spec;
        spec.n = n;
        spec.m = cfg.clusters;
        spec.f = feat_dim;
        spec.separation = separation;
        spec.noise = noise;
        spec.seed = cfg.seed;
        // Split the target average degree 9:1 between intra- and inter-block
        // pairs, mirroring a strongly assortative graph.
        const double block = static_cast<double>(n) / cfg.clusters;
        spec.p_in = std::min(1.0, 0.9 * avg_degree / std::max(1.0, block - 1.0));
        spec.p_out = std::min(1.0, 0.1 * avg_degree / std::max(1.0, n - block));

        auto start = Clock::now();
        const sase::GraphBundle g = sase::generate_sbm(spec);
        const double gen_seconds = seconds_since(start);

        // Best-of-repeats suppresses scheduler noise in the scaling ratios.
        sase::ClusterResult result;
        double pipeline_seconds = std::numeric_limits<double>::infinity();
        for (int rep = 0; rep < repeats; ++rep) {
            start = Clock::now();
            sase::ClusterResult run_result = sase::sase_cluster_once(g, cfg, cfg.order);
            const double run_seconds = seconds_since(start);
            if (run_seconds < pipeline_seconds) {
                pipeline_seconds = run_seconds;
                result = std::move(run_result);
            }
        }

        const std::int64_t rss = peak_rss_bytes();
        out << n << "," << g.undirected_edge_count() << "," << gen_seconds << ","
            << pipeline_seconds << "," << result.timings.smooth << "," << result.timings.fuse
            << "," << result.timings.reduce << "," << result.timings.bandwidth << ","
            << result.timings.project << "," << result.timings.embed << ","
            << result.timings.cluster << "," << result.timings.score << ","
            << sase::ari(result.assignments, g.labels) << "," << rss << ","
            << (rss > 0 ? "vm_hwm" : "none") << "\n";
        std::cerr << "n=" << n << " pipeline=" << pipeline_seconds << "s rss=" << rss << "\n";
    }
    std::cout << "wrote " << out_csv << "\n";
    return kExitOk;
}

int cmd_eval(const std::string& pred_path, const std::string& truth_path) {
    const std::vector<int> pred = sase::load_labels_file(pred_path);
    const std::vector<int> truth = sase::load_labels_file(truth_path);
    std::cout << "acc=" << sase::accuracy(pred, truth) << " nmi=" << sase::nmi(pred, truth)
              << " ari=" << sase::ari(pred, truth) << "\n";
    return kExitOk;
}

int cmd_gen(const sase::SbmSpec& spec, const std::string& out_dir, bool text_features) {
    const sase::GraphBundle g = sase::generate_sbm(spec);
    sase::save_bundle(g, out_dir, !text_features);
    std::cout << "wrote bundle " << out_dir << " (n=" << g.n
              << ", edges=" << g.undirected_edge_count() << ")\n";
    return kExitOk;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"SASE attributed-graph clustering"};
    app.require_subcommand(1);

    // cluster
    auto* cluster = app.add_subcommand("cluster", "Cluster a graph bundle");
    std::string bundle_dir, out_path, method = "sase";
    CommonOptions cluster_opts;
    cluster->add_option("bundle", bundle_dir, "Bundle directory")->required();
    cluster->add_option("--out", out_path, "Result document path");
    cluster->add_option("--method", method,
                        "sase (default), sgc (k-means on smoothed features), or "
                        "exact-sc (dense spectral clustering, n <= 5000)")
        ->check(CLI::IsMember({"sase", "sgc", "exact-sc"}));
    add_config_flags(*cluster, cluster_opts);

    // sweep
    auto* sweep = app.add_subcommand("sweep", "Grid sweep over alpha and/or k");
    std::string sweep_bundle, sweep_out = "sweep.csv", alphas_text, orders_text;
    CommonOptions sweep_opts;
    sweep->add_option("bundle", sweep_bundle, "Bundle directory")->required();
    sweep->add_option("--out", sweep_out, "Output CSV path");
    sweep->add_option("--alphas", alphas_text, "Comma list, e.g. 0,0.1,0.2");
    sweep->add_option("--orders", orders_text, "Comma list or range, e.g. 1:20");
    add_config_flags(*sweep, sweep_opts);

    // bench
    auto* bench = app.add_subcommand("bench", "Scaling benchmark on synthetic graphs");
    std::string sizes_text = "25000,50000,100000", bench_out = "bench.csv";
    int avg_degree = 10, repeats = 3;
    std::int64_t bench_feat_dim = 64;
    double bench_separation = 4.0, bench_noise = 1.0;
    CommonOptions bench_opts;
    bench_opts.cfg.order = 2;
    bench_opts.cfg.clusters = 8;
    bench->add_option("--sizes", sizes_text, "Comma list of node counts");
    bench->add_option("--out", bench_out, "Output CSV path");
    bench->add_option("--avg-degree", avg_degree, "Target average degree");
    bench->add_option("--feat-dim", bench_feat_dim, "Feature dimension");
    bench->add_option("--separation", bench_separation, "Centroid separation");
    bench->add_option("--noise", bench_noise, "Feature noise");
    bench->add_option("--repeats", repeats, "Timing repetitions per size (best-of)");
    add_config_flags(*bench, bench_opts);

    // eval
    auto* eval = app.add_subcommand("eval", "Score predicted labels against truth");
    std::string pred_path, truth_path;
    eval->add_option("pred", pred_path, "Predicted label file")->required();
    eval->add_option("truth", truth_path, "Ground-truth label file")->required();

    // gen
    auto* gen = app.add_subcommand("gen", "Generate an attributed SBM bundle");
    sase::SbmSpec gen_spec;
    gen_spec.n = 1000;
    gen_spec.m = 4;
    gen_spec.p_in = 0.1;
    gen_spec.p_out = 0.002;
    gen_spec.f = 16;
    gen_spec.separation = 4.0;
    gen_spec.noise = 1.0;
    gen_spec.seed = 42;
    std::string gen_out;
    bool gen_text_features = false;
    gen->add_option("--out", gen_out, "Output bundle directory")->required();
    gen->add_option("--nodes", gen_spec.n, "Node count");
    gen->add_option("--blocks", gen_spec.m, "Planted block count");
    gen->add_option("--p-in", gen_spec.p_in, "Intra-block edge probability");
    gen->add_option("--p-out", gen_spec.p_out, "Inter-block edge probability");
    gen->add_option("--feat-dim", gen_spec.f, "Feature dimension");
    gen->add_option("--separation", gen_spec.separation, "Centroid separation");
    gen->add_option("--noise", gen_spec.noise, "Feature noise");
    gen->add_option("--seed", gen_spec.seed, "RNG seed");
    gen->add_flag("--text-features", gen_text_features, "Write features as CSV text");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) return app.exit(e); // --help
        app.exit(e);
        return kExitUsage;
    }

    try {
        if (cluster->parsed()) return cmd_cluster(bundle_dir, out_path, method, cluster_opts);
        if (sweep->parsed())
            return cmd_sweep(sweep_bundle, sweep_out, alphas_text, orders_text, sweep_opts);
        if (bench->parsed())
            return cmd_bench(sizes_text, bench_out, avg_degree, bench_feat_dim, bench_separation,
                             bench_noise, repeats, bench_opts);
        if (eval->parsed()) return cmd_eval(pred_path, truth_path);
        if (gen->parsed()) return cmd_gen(gen_spec, gen_out, gen_text_features);
    } catch (const std::invalid_argument& e) {
        std::cerr << "usage error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const sase::DataError& e) {
        std::cerr << "data error: " << e.what() << "\n";
        return kExitData;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitNumerical;
    }
    return kExitUsage;
}
