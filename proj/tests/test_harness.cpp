#include "pcc/datasets.hpp"
#include "pcc/errors.hpp"
#include "pcc/harness.hpp"

#include <doctest.h>
#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <regex>
#include <sstream>

using namespace pcc;
using Eigen::MatrixXd;

namespace {

// Wall-clock columns differ run to run; blank them before comparing.
std::string mask_column(const std::string& csv, std::size_t column) {
    std::istringstream in(csv);
    std::string out, line;
    while (std::getline(in, line)) {
        std::size_t start = 0;
        for (std::size_t c = 0; c < column; ++c) start = line.find(',', start) + 1;
        const std::size_t end = line.find(',', start);
        out += line.substr(0, start) + "#" + line.substr(end) + "\n";
    }
    return out;
}

ExperimentSpec small_spec() {
    ExperimentSpec s = builtin_spec("1b");
    s.grid = {100, 150};
    s.reps = 4;
    s.methods = {Method::Pcc, Method::Npcc, Method::Rsc};
    s.seed = 5;
    return s;
}

std::string summary_csv(const ExperimentResult& r) {
    std::ostringstream o;
    write_summary_csv(o, r.summary);
    return mask_column(o.str(), 6);
}

std::string reps_csv(const ExperimentResult& r) {
    std::ostringstream o;
    write_reps_csv(o, r.reps);
    return mask_column(o.str(), 7);
}

std::filesystem::path temp_file(const std::string& name) {
    return std::filesystem::temp_directory_path() / ("pcc_test_" + name);
}

}  // namespace

TEST_CASE("built-in specs") {
    const ExperimentSpec s2c = builtin_spec("2c");
    CHECK(s2c.grid_param == "c0");
    CHECK(s2c.grid.size() == 12);
    const DcsbmParams p2c = experiment_params(s2c, 3, 1);
    CHECK(p2c.p == (MatrixXd(2, 2) << 0.9, 0.4, 0.4, 0.8).finished());
    CHECK(std::count(p2c.labels.values.begin(), p2c.labels.values.end(), 0) == 100);
    CHECK(p2c.n == 400);

    const ExperimentSpec s3 = builtin_spec("3");
    CHECK(s3.grid == std::vector<double>{500, 1000, 2000, 3000, 4000});
    CHECK(s3.reps == 10);
    const DcsbmParams p3 = experiment_params(s3, 500, 2);
    CHECK(p3.k == 4);
    CHECK(p3.p(0, 0) == 1.0);
    CHECK(p3.p(1, 3) == 0.5);
    for (int i = 0; i < p3.n; ++i) CHECK(p3.theta[i] == doctest::Approx(0.2 * (p3.labels.values[i] + 1)));

    CHECK(builtin_spec("1a").grid.size() == 6);
    CHECK(builtin_spec("1a").reps == 100);
    const DcsbmParams p1a = experiment_params(builtin_spec("1a"), 300, 1);
    CHECK(p1a.p(0, 1) == 0.3);
    CHECK(p1a.p(1, 1) == 0.8);

    const ExperimentSpec s2b = builtin_spec("2b");
    CHECK(s2b.grid.size() == 10);
    CHECK(s2b.grid.back() == doctest::Approx(0.6));
    const DcsbmParams p2b = experiment_params(s2b, 0.25, 1);
    CHECK(p2b.p(0, 1) == 0.25);
    CHECK(p2b.labels.values[199] == 0);
    CHECK(p2b.labels.values[200] == 1);

    const DcsbmParams p2a = experiment_params(builtin_spec("2a"), 4, 1);
    for (int i = 0; i < p2a.n; ++i) CHECK(p2a.theta[i] == (p2a.labels.values[i] == 0 ? 1.0 : 0.25));

    const DcsbmParams p2e = experiment_params(builtin_spec("2e"), 2, 1);
    CHECK(p2e.theta[199] == doctest::Approx(0.4 + 0.5 * 0.25));
    CHECK(builtin_spec("2f").grid.size() == 8);

    CHECK_THROWS_AS(builtin_spec("4"), InputError);
}

TEST_CASE("degenerate specs are rejected") {
    ExperimentSpec s = small_spec();
    s.reps = 0;
    CHECK_THROWS_WITH_AS(run_experiment(s), "no repetitions", InputError);
    s = small_spec();
    s.grid.clear();
    CHECK_THROWS_AS(run_experiment(s), InputError);
    s = small_spec();
    s.grid = {1.5};
    CHECK_THROWS_AS(run_experiment(s), InputError);
}

TEST_CASE("experiments replay identically") {
    const ExperimentSpec s = small_spec();
    const ExperimentResult a = run_experiment(s), b = run_experiment(s);
    CHECK(summary_csv(a) == summary_csv(b));
    CHECK(reps_csv(a) == reps_csv(b));
    REQUIRE(a.summary.size() == 6);
    for (const auto& row : a.summary) {
        CHECK(row.mean_error >= 0.0);
        CHECK(row.mean_error <= 1.0);
        CHECK(row.mean_seconds > 0.0);
        CHECK(row.failures == 0);
        CHECK(row.reps == 4);
    }
    ExperimentSpec other = s;
    other.seed = 6;
    CHECK(summary_csv(run_experiment(other)) != summary_csv(a));
}

TEST_CASE("parallel repetitions match serial ones") {
    ExperimentSpec s = small_spec();
    const ExperimentResult serial = run_experiment(s);
    s.threads = 3;
    const ExperimentResult parallel = run_experiment(s);
    CHECK(summary_csv(serial) == summary_csv(parallel));
    CHECK(reps_csv(serial) == reps_csv(parallel));
}

TEST_CASE("row order and statistics") {
    const ExperimentResult r = run_experiment(small_spec());
    REQUIRE(r.reps.size() == 2 * 3 * 4);
    // grid-major, method-minor, rep-minor
    CHECK(r.reps[0].value == 100);
    CHECK(r.reps[3].rep == 3);
    CHECK(r.reps[4].method == Method::Npcc);
    CHECK(r.reps[12].value == 150);
    double sum = 0.0, ss = 0.0;
    for (int i = 0; i < 4; ++i) sum += r.reps[i].error_rate;
    const double mean = sum / 4;
    for (int i = 0; i < 4; ++i) ss += std::pow(r.reps[i].error_rate - mean, 2);
    CHECK(r.summary[0].mean_error == doctest::Approx(mean));
    CHECK(r.summary[0].std_error == doctest::Approx(std::sqrt(ss / 3)));
    CHECK(r.reps[0].seed == 5);
    CHECK(r.reps[13].seed == 6);
}

TEST_CASE("failed repetitions are counted, not averaged") {
    ExperimentSpec s = builtin_spec("1a");
    s.grid = {100};
    s.reps = 3;
    s.methods = {Method::PccStar, Method::Pcc};
    s.options.mk = 150;  // exceeds n: every pcc* run fails
    const ExperimentResult r = run_experiment(s);
    CHECK(r.summary[0].failures == 3);
    CHECK(std::isnan(r.summary[0].mean_error));
    CHECK(r.summary[1].failures == 0);
    CHECK_FALSE(r.reps[0].message.empty());
}

TEST_CASE("summary CSV layout") {
    std::ostringstream o;
    write_summary_csv(o, run_experiment(small_spec()).summary);
    const std::string csv = o.str();
    CHECK(csv.rfind("experiment,grid_param,value,method,mean_error,std_error,mean_seconds,failures,reps\n", 0) == 0);
    CHECK(csv.find("\n1b,n,100,pcc,") != std::string::npos);
    CHECK(std::count(csv.begin(), csv.end(), '\n') == 7);
}

TEST_CASE("JSON specs") {
    const ExperimentSpec a = spec_from_json(R"({"id": "3", "grid": [500], "reps": 2, "methods": ["pcc", "npcc*"],
                                               "mk": 6, "seed": 9})");
    CHECK(a.id == "3");
    CHECK(a.grid == std::vector<double>{500});
    CHECK(a.reps == 2);
    CHECK(a.methods == std::vector<Method>{Method::Pcc, Method::NpccStar});
    CHECK(*a.options.mk == 6);
    CHECK(a.seed == 9);

    const ExperimentSpec c = spec_from_json(R"({"id": "custom", "grid": [60, 80], "reps": 2,
        "params": {"n": 0, "K": 2, "P": [[0.9, 0.2], [0.2, 0.9]],
                   "theta": {"kind": "constant", "value": 0.8},
                   "labels": {"kind": "equal_probability"}}})");
    CHECK(experiment_params(c, 80, 1).n == 80);
    const ExperimentResult r = run_experiment(c);
    CHECK(r.summary.size() == 8);
    CHECK(r.summary[0].experiment == "custom");

    CHECK_THROWS_AS(spec_from_json(R"({"id": "custom", "grid": [10]})"), InputError);
    CHECK_THROWS_AS(spec_from_json(R"({"id": "1a", "reps": 0})"), InputError);
    CHECK_THROWS_AS(spec_from_json(R"({"id": "1a", "methods": ["occam"]})"), InputError);
    CHECK_THROWS_AS(spec_from_json("[1, 2]"), InputError);
}

TEST_CASE("M_k sweep on karate") {
    const Graph g = datasets::karate();
    const LabelVector truth = datasets::karate_labels();
    std::vector<int> grid;
    for (int m = 2; m <= 20; ++m) grid.push_back(m);
    const auto rows = sweep_mk(g, truth, 2, Method::PccStar, grid);
    REQUIRE(rows.size() == 19);
    for (const auto& r : rows) CHECK(r.mismatches == 0);

    const auto single = sweep_mk(g, truth, 2, Method::PccStar, {2});
    CHECK(single.size() == 1);
    CHECK(single[0].mismatches == align_and_score(pcc::pcc(g, 2).labels, truth, 2).mismatches);
    CHECK_THROWS_AS(sweep_mk(g, truth, 2, Method::Pcc, grid), InputError);
    CHECK_THROWS_AS(sweep_mk(g, truth, 2, Method::PccStar, {1}), InputError);
}

TEST_CASE("sliced M_k sweep equals one-shot recomputation") {
    ExperimentSpec s = builtin_spec("1b");
    const DcsbmParams p = experiment_params(s, 250, 3);
    const Graph g = sample_adjacency(p, 4);
    for (Method m : {Method::PccStar, Method::NpccStar}) {
        const std::vector<int> grid{3, 4, 6, 9};
        const auto sliced = sweep_mk(g, p.labels, 3, m, grid);
        for (std::size_t i = 0; i < grid.size(); ++i) {
            MethodOptions o;
            o.mk = grid[i];
            const Detection d = detect_communities(g, 3, m, o);
            CHECK(sliced[i].mismatches == align_and_score(d.labels, d.restrict(p.labels), 3).mismatches);
            CHECK(sweep_mk(g, p.labels, 3, m, {grid[i]})[0].mismatches == sliced[i].mismatches);
        }
    }
}

TEST_CASE("tau sweep on karate") {
    const Graph g = datasets::karate();
    const LabelVector truth = datasets::karate_labels();
    std::vector<double> grid;
    for (int t = 0; t <= 10; ++t) grid.push_back(t);
    const auto rows = sweep_tau(g, truth, 2, Method::Npcc, grid);
    REQUIRE(rows.size() == 12);
    for (const auto& r : rows) CHECK(r.mismatches == 0);
    CHECK(rows.back().is_default);
    CHECK(rows.back().value == doctest::Approx(156.0 / 34.0));
    CHECK_FALSE(rows.front().is_default);

    const auto def = sweep_tau(g, truth, 2, Method::Npcc, {default_tau(g)});
    CHECK(def[0].mismatches == def[1].mismatches);
    CHECK(def[0].mismatches == align_and_score(npcc(g, 2).labels, truth, 2).mismatches);
    CHECK_THROWS_AS(sweep_tau(g, truth, 2, Method::Pcc, grid), InputError);

    std::ostringstream o;
    write_sweep_csv(o, rows);
    CHECK(o.str().rfind("sweep,method,param,value,mismatches,n,error_rate,default\n", 0) == 0);
    CHECK(o.str().find("tau,npcc,tau,4.588235294,0,34,0,1\n") != std::string::npos);
}

TEST_CASE("SVG charts") {
    std::ostringstream o;
    write_summary_svg(o, run_experiment(small_spec()).summary, "Trend <test>");
    const std::string svg = o.str();
    CHECK(svg.rfind("<svg", 0) == 0);
    CHECK(std::count(svg.begin(), svg.end(), '\n') > 10);
    CHECK(svg.find("Trend &lt;test&gt;") != std::string::npos);
    std::size_t lines = 0;
    for (std::size_t p = svg.find("<polyline"); p != std::string::npos; p = svg.find("<polyline", p + 1)) ++lines;
    CHECK(lines == 3);
}

TEST_CASE("detect end to end") {
    const auto labels_out = temp_file("labels.txt"), emb_out = temp_file("embedding.csv");
    DetectRequest req;
    req.graph = PCC_DATA_DIR "/karate.edges";
    req.truth = std::filesystem::path(PCC_DATA_DIR "/karate.labels");
    req.k = 2;
    req.labels_out = labels_out;
    req.embedding_out = emb_out;
    const auto j = nlohmann::json::parse(run_detect(req));
    CHECK(j["score"]["summary"] == "0/34");
    CHECK(j["nodes"] == 34);
    CHECK(j["score"]["error_bound_rate"].get<double>() > 0.0);
    CHECK_FALSE(j.contains("tau"));

    std::ifstream lf(labels_out);
    int lines = 0;
    for (std::string line; std::getline(lf, line);) ++lines;
    CHECK(lines == 34);
    std::ifstream ef(emb_out);
    std::string first;
    std::getline(ef, first);
    CHECK(std::count(first.begin(), first.end(), ',') == 1);
    std::filesystem::remove(labels_out);
    std::filesystem::remove(emb_out);

    DetectRequest unlabeled;
    unlabeled.graph = req.graph;
    unlabeled.method = Method::Npcc;
    const auto u = nlohmann::json::parse(run_detect(unlabeled));
    CHECK_FALSE(u.contains("score"));
    CHECK(u["tau"].get<double>() == doctest::Approx(4.5882).epsilon(1e-4));

    DetectRequest missing;
    missing.graph = "/nonexistent/graph.txt";
    CHECK_THROWS_AS(run_detect(missing), InputError);
}

TEST_CASE("matrix CSV") {
    std::ostringstream o;
    write_matrix_csv(o, (MatrixXd(2, 2) << 1, 0.5, -2, 3).finished());
    CHECK(o.str() == "1,0.5\n-2,3\n");
}
