// End-to-end checks of the command-line tool: every subcommand, the exit-code
// contract, and output-file reproducibility.
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <json.hpp>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <string>
#include <unistd.h>

namespace fs = std::filesystem;

namespace {

const std::string kCli = SASE_CLI_PATH;

struct TempDir {
    fs::path path;
    explicit TempDir(const std::string& tag) {
        path = fs::temp_directory_path() / ("sase_cli_" + tag + "_" + std::to_string(::getpid()));
        fs::remove_all(path);
        fs::create_directories(path);
    }
    ~TempDir() { fs::remove_all(path); }
};

int run(const std::string& args) {
    const int status = std::system((kCli + " " + args + " >/dev/null 2>&1").c_str());
    return WEXITSTATUS(status);
}

nlohmann::json read_json(const fs::path& p) {
    std::ifstream in(p);
    REQUIRE(in.good());
    nlohmann::json doc;
    in >> doc;
    return doc;
}

} // namespace

TEST_CASE("cli: gen -> cluster -> eval round trip") {
    TempDir tmp("roundtrip");
    const std::string bundle = (tmp.path / "bundle").string();
    const std::string result = (tmp.path / "result.json").string();

    REQUIRE(run("gen --out " + bundle +
                " --nodes 300 --blocks 3 --p-in 0.15 --p-out 0.005 --feat-dim 8 --seed 3") == 0);
    REQUIRE(fs::exists(fs::path(bundle) / "manifest.json"));

    REQUIRE(run("cluster " + bundle + " --clusters 3 --order 2 --alpha 0.2 --dim 6 --seed 4 --out " +
                result) == 0);
    const nlohmann::json doc = read_json(result);
    CHECK(doc.contains("config"));
    CHECK(doc.contains("metrics"));
    CHECK(doc.contains("timings"));
    CHECK(doc.contains("assignments"));
    CHECK(doc["assignments"].size() == 300);
    CHECK(doc["config"]["resolved_sigma"].get<double>() > 0.0);

    // Feed the assignments back through eval.
    std::ofstream pred(tmp.path / "pred.txt");
    for (const auto& a : doc["assignments"]) pred << a.get<int>() << "\n";
    pred.close();
    CHECK(run("eval " + (tmp.path / "pred.txt").string() + " " +
              (fs::path(bundle) / "labels.txt").string()) == 0);

    // Order 0 with alpha 1 clusters the raw features only.
    CHECK(run("cluster " + bundle + " --clusters 3 --order 0 --alpha 1.0 --dim 6 --seed 4") == 0);
}

TEST_CASE("cli: reference methods run and label their output") {
    TempDir tmp("baselines");
    const std::string bundle = (tmp.path / "bundle").string();
    REQUIRE(run("gen --out " + bundle +
                " --nodes 200 --blocks 2 --p-in 0.2 --p-out 0.01 --feat-dim 6 --seed 51") == 0);

    const std::string sgc_out = (tmp.path / "sgc.json").string();
    REQUIRE(run("cluster " + bundle + " --method sgc --clusters 2 --order 2 --seed 52 --out " +
                sgc_out) == 0);
    CHECK(read_json(sgc_out)["method"] == "sgc");

    const std::string sc_out = (tmp.path / "sc.json").string();
    REQUIRE(run("cluster " + bundle +
                " --method exact-sc --clusters 2 --order 2 --alpha 0.2 --dim 4 --seed 53 --out " +
                sc_out) == 0);
    CHECK(read_json(sc_out)["method"] == "exact-sc");

    // Baselines are fixed-order only.
    CHECK(run("cluster " + bundle + " --method sgc --adaptive --clusters 2") == 1);
}

TEST_CASE("cli: fixed-seed runs are bit-reproducible apart from timings") {
    TempDir tmp("determinism");
    const std::string bundle = (tmp.path / "bundle").string();
    REQUIRE(run("gen --out " + bundle +
                " --nodes 200 --blocks 2 --p-in 0.2 --p-out 0.01 --feat-dim 6 --seed 11") == 0);

    const std::string args =
        "cluster " + bundle + " --clusters 2 --order 1 --alpha 0.3 --dim 4 --seed 12 --out ";
    REQUIRE(run(args + (tmp.path / "a.json").string()) == 0);
    REQUIRE(run(args + (tmp.path / "b.json").string()) == 0);

    nlohmann::json a = read_json(tmp.path / "a.json");
    nlohmann::json b = read_json(tmp.path / "b.json");
    a.erase("timings");
    b.erase("timings");
    CHECK(a == b);
}

TEST_CASE("cli: adaptive cluster writes a trace sidecar") {
    TempDir tmp("adaptive");
    const std::string bundle = (tmp.path / "bundle").string();
    REQUIRE(run("gen --out " + bundle +
                " --nodes 250 --blocks 3 --p-in 0.15 --p-out 0.005 --feat-dim 8 --seed 21") == 0);
    const std::string result = (tmp.path / "res.json").string();
    REQUIRE(run("cluster " + bundle +
                " --adaptive --max-order 15 --clusters 3 --alpha 0.2 --dim 6 --seed 22 --out " +
                result) == 0);
    CHECK(fs::exists(result));
    REQUIRE(fs::exists(result + ".trace.csv"));
    std::ifstream trace(result + ".trace.csv");
    std::string header;
    std::getline(trace, header);
    CHECK(header == "k,s,delta,acc,nmi,ari,seconds");
    const nlohmann::json doc = read_json(result);
    CHECK(doc["selected_order"].get<int>() >= 1);
}

TEST_CASE("cli: sweep with a single grid point matches cluster") {
    TempDir tmp("sweep");
    const std::string bundle = (tmp.path / "bundle").string();
    REQUIRE(run("gen --out " + bundle +
                " --nodes 150 --blocks 2 --p-in 0.2 --p-out 0.01 --feat-dim 6 --seed 31") == 0);

    const std::string csv = (tmp.path / "sweep.csv").string();
    REQUIRE(run("sweep " + bundle +
                " --orders 2 --alphas 0.4 --clusters 2 --dim 4 --seed 32 --out " + csv) == 0);
    const std::string result = (tmp.path / "r.json").string();
    REQUIRE(run("cluster " + bundle + " --order 2 --alpha 0.4 --clusters 2 --dim 4 --seed 32 --out " +
                result) == 0);

    std::ifstream in(csv);
    std::string header, row;
    std::getline(in, header);
    REQUIRE(std::getline(in, row));
    const double swept_criterion = std::stod(row.substr(row.find(',', row.find(',') + 1) + 1));
    const nlohmann::json doc = read_json(result);
    CHECK(swept_criterion == doctest::Approx(doc["metrics"]["criterion"].get<double>()));
}

TEST_CASE("cli: exit codes follow the contract") {
    // Usage errors.
    CHECK(run("cluster") == 1);
    CHECK(run("unknown-subcommand") == 1);
    CHECK(run("gen --out /tmp/x --p-in 0.5 --p-out 0.9") == 1); // p_out > p_in

    // Data errors name the offending path.
    CHECK(run("cluster /nonexistent/bundle/path --clusters 2") == 2);
    CHECK(run("eval /nonexistent/a.txt /nonexistent/b.txt") == 2);

    // Help succeeds.
    CHECK(run("--help") == 0);
}

TEST_CASE("cli: bench writes one row per size") {
    TempDir tmp("bench");
    const std::string csv = (tmp.path / "bench.csv").string();
    REQUIRE(run("bench --sizes 400 --clusters 4 --feat-dim 8 --dim 4 --seed 41 --out " + csv) == 0);
    std::ifstream in(csv);
    std::string header, row;
    std::getline(in, header);
    CHECK(header.rfind("n,edges,", 0) == 0);
    int rows = 0;
    while (std::getline(in, row))
        if (!row.empty()) ++rows;
    CHECK(rows == 1);
}
