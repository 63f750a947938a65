#include "pcc/dcsbm.hpp"
#include "pcc/errors.hpp"
#include "pcc/harness.hpp"
#include "pcc/methods.hpp"

#include <CLI11.hpp>

#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>

namespace {

constexpr int kOk = 0;
constexpr int kInputError = 1;
constexpr int kNumericalError = 2;

struct Common {
    std::string method;
    int k = 2;
    std::optional<double> tau;
    double threshold_t = 0.1;
    std::optional<int> mk;
    bool force_extra = false;
    std::uint64_t seed = 1;
    int restarts = 50;
    std::string out;
    std::string svg;
};

void add_method_flags(CLI::App* cmd, Common& c, const std::string& default_method) {
    c.method = default_method;
    cmd->add_option("--method", c.method, "pcc, npcc, pcc+, npcc+, pcc*, npcc*, rsc or score")
        ->capture_default_str();
    cmd->add_option("--k", c.k, "Number of communities")->capture_default_str();
    cmd->add_option("--tau", c.tau, "Laplacian regulariser (default: average degree)");
    cmd->add_option("--threshold-t", c.threshold_t, "Eigen-gap threshold for the + variants")
        ->capture_default_str();
    cmd->add_option("--mk", c.mk, "Embedding width for the * variants (default: K)");
    cmd->add_flag("--force-extra", c.force_extra, "+ variants: always use K+1 eigenvectors");
    cmd->add_option("--seed", c.seed, "k-means seed")->capture_default_str();
    cmd->add_option("--restarts", c.restarts, "k-means restarts")->capture_default_str();
}

void add_output_flags(CLI::App* cmd, Common& c) {
    cmd->add_option("--out", c.out, "CSV output file (default: stdout)");
    cmd->add_option("--svg", c.svg, "SVG line chart output file");
}

pcc::MethodOptions method_options(const Common& c) {
    pcc::MethodOptions o;
    o.tau = c.tau;
    o.threshold_t = c.threshold_t;
    o.mk = c.mk;
    o.force_extra = c.force_extra;
    o.kmeans.seed = c.seed;
    o.kmeans.restarts = c.restarts;
    return o;
}

pcc::IdMode parse_ids(const std::string& s) {
    if (s == "strings") return pcc::IdMode::Strings;
    if (s == "zero") return pcc::IdMode::ZeroIndexed;
    if (s == "one") return pcc::IdMode::OneIndexed;
    throw pcc::InputError("--ids must be strings, zero or one");
}

std::ofstream open_out(const std::string& path) {
    std::ofstream f(path);
    if (!f) throw pcc::InputError("cannot write " + path);
    return f;
}

template <class Writer>
void emit_csv(const std::string& path, Writer&& write) {
    if (path.empty()) {
        write(std::cout);
    } else {
        auto f = open_out(path);
        write(f);
    }
}

std::string read_file(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw pcc::InputError("cannot open " + path);
    std::ostringstream ss;
    ss << f.rdbuf();
    return ss.str();
}

// "lo:hi" or "lo:hi:step" or "a,b,c"
std::vector<double> parse_grid(const std::string& text) {
    std::vector<double> out;
    auto number = [&](const std::string& s) {
        try {
            std::size_t used = 0;
            const double v = std::stod(s, &used);
            if (used != s.size()) throw std::invalid_argument(s);
            return v;
        } catch (const std::exception&) {
            throw pcc::InputError("bad grid value '" + s + "'");
        }
    };
    if (text.find(':') != std::string::npos) {
        std::vector<std::string> parts;
        std::stringstream ss(text);
        for (std::string p; std::getline(ss, p, ':');) parts.push_back(p);
        if (parts.size() < 2 || parts.size() > 3) throw pcc::InputError("grid range must be lo:hi[:step]");
        const double lo = number(parts[0]), hi = number(parts[1]);
        const double step = parts.size() == 3 ? number(parts[2]) : 1.0;
        if (!(step > 0.0) || hi < lo) throw pcc::InputError("bad grid range '" + text + "'");
        for (int i = 0;; ++i) {
            const double v = lo + i * step;
            if (v > hi + 1e-9) break;
            out.push_back(v);
        }
    } else {
        std::stringstream ss(text);
        for (std::string p; std::getline(ss, p, ',');)
            if (!p.empty()) out.push_back(number(p));
    }
    if (out.empty()) throw pcc::InputError("grid is empty");
    return out;
}

std::vector<pcc::Method> parse_methods(const std::string& text) {
    std::vector<pcc::Method> out;
    std::stringstream ss(text);
    for (std::string p; std::getline(ss, p, ',');)
        if (!p.empty()) out.push_back(pcc::parse_method(p));
    return out;
}

void print_report(const std::string& name, const pcc::IdealReport& r) {
    std::printf("%-28s %-4s mismatches=%zu within=%.3g across=%.3g eig_gap=%.3g", name.c_str(),
                r.passed ? "ok" : "FAIL", r.cluster.mismatches, r.max_within, r.min_across, r.eigenvalue_gap);
    if (r.intertwining_gap > 0.0) std::printf(" intertwining=%.3g", r.intertwining_gap);
    std::printf("\n");
    for (const auto& f : r.failures) std::printf("    %s\n", f.c_str());
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Spectral community detection under the degree-corrected block model"};
    app.require_subcommand(1);

    // detect
    Common det;
    std::string graph_path, labels_path, labels_out, embedding_out, ids = "strings", comment = "#";
    auto* detect = app.add_subcommand("detect", "Detect communities in an edge list");
    detect->add_option("graph", graph_path, "Edge list file")->required();
    detect->add_option("--labels", labels_path, "Ground-truth labels (node label per line)");
    detect->add_option("--labels-out", labels_out, "Write estimated labels here");
    detect->add_option("--embedding-out", embedding_out, "Write the clustered embedding as CSV");
    detect->add_option("--ids", ids, "Node id mode: strings, zero or one")->capture_default_str();
    detect->add_option("--comment", comment, "Comment prefix")->capture_default_str();
    add_method_flags(detect, det, "pcc");

    // simulate
    Common sim;
    std::string experiment, spec_file, methods, grid, reps_out;
    std::optional<int> reps;
    std::optional<std::uint64_t> sim_seed;
    int threads = 1;
    auto* simulate = app.add_subcommand("simulate", "Run a Monte Carlo experiment");
    simulate->add_option("--experiment", experiment, "Built-in id: 1a, 1b, 2a..2f, 3");
    simulate->add_option("--spec", spec_file, "JSON experiment spec");
    simulate->add_option("--method", methods, "Comma-separated methods (default: pcc,npcc,score,rsc)");
    simulate->add_option("--grid", grid, "Grid override: lo:hi[:step] or a,b,c");
    simulate->add_option("--reps", reps, "Repetitions per grid point");
    simulate->add_option("--seed", sim_seed, "Base seed");
    simulate->add_option("--threads", threads, "Worker threads")->capture_default_str();
    simulate->add_option("--tau", sim.tau, "Laplacian regulariser (default: average degree)");
    simulate->add_option("--threshold-t", sim.threshold_t, "Eigen-gap threshold for the + variants");
    simulate->add_option("--mk", sim.mk, "Embedding width for the * variants");
    simulate->add_option("--restarts", sim.restarts, "k-means restarts");
    simulate->add_option("--reps-out", reps_out, "Per-repetition CSV");
    add_output_flags(simulate, sim);

    // sweeps
    Common smk, stau;
    std::string mk_graph, mk_labels, mk_grid = "2:20", mk_ids = "strings";
    auto* sweep_mk = app.add_subcommand("sweep-mk", "Mismatches as a function of M_k");
    sweep_mk->add_option("graph", mk_graph, "Edge list file")->required();
    sweep_mk->add_option("--labels", mk_labels, "Ground-truth labels")->required();
    sweep_mk->add_option("--grid", mk_grid, "M_k values: lo:hi[:step] or a,b,c")->capture_default_str();
    sweep_mk->add_option("--ids", mk_ids, "Node id mode")->capture_default_str();
    add_method_flags(sweep_mk, smk, "pcc*");
    add_output_flags(sweep_mk, smk);

    std::string tau_graph, tau_labels, tau_grid = "0:10", tau_ids = "strings";
    auto* sweep_tau = app.add_subcommand("sweep-tau", "Mismatches as a function of tau");
    sweep_tau->add_option("graph", tau_graph, "Edge list file")->required();
    sweep_tau->add_option("--labels", tau_labels, "Ground-truth labels")->required();
    sweep_tau->add_option("--grid", tau_grid, "tau values: lo:hi[:step] or a,b,c")->capture_default_str();
    sweep_tau->add_option("--ids", tau_ids, "Node id mode")->capture_default_str();
    add_method_flags(sweep_tau, stau, "npcc");
    add_output_flags(sweep_tau, stau);

    // oracle
    std::string params_file;
    bool figure_one = false;
    int draws = 0;
    std::uint64_t oracle_seed = 1;
    std::optional<double> oracle_tau;
    auto* oracle = app.add_subcommand("oracle", "Population-level checks of PCC and NPCC");
    oracle->add_option("--params", params_file, "DCSBM params JSON");
    oracle->add_flag("--figure-one", figure_one, "The n = 90, K = 3 example model");
    oracle->add_option("--random", draws, "Number of random models");
    oracle->add_option("--seed", oracle_seed, "Seed for random models and labels")->capture_default_str();
    oracle->add_option("--tau", oracle_tau, "Regulariser (default: mean expected degree)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kOk : kInputError;
    }

    try {
        if (*detect) {
            pcc::DetectRequest req;
            req.graph = graph_path;
            if (!labels_path.empty()) req.truth = labels_path;
            if (!labels_out.empty()) req.labels_out = labels_out;
            if (!embedding_out.empty()) req.embedding_out = embedding_out;
            req.method = pcc::parse_method(det.method);
            req.k = det.k;
            req.options = method_options(det);
            req.edge_options.ids = parse_ids(ids);
            req.edge_options.comment_prefix = comment;
            std::cout << pcc::run_detect(req) << '\n';
        } else if (*simulate) {
            if (experiment.empty() == spec_file.empty())
                throw pcc::InputError("give exactly one of --experiment or --spec");
            pcc::ExperimentSpec spec =
                spec_file.empty() ? pcc::builtin_spec(experiment) : pcc::spec_from_json(read_file(spec_file));
            if (!methods.empty()) spec.methods = parse_methods(methods);
            if (!grid.empty()) spec.grid = parse_grid(grid);
            if (reps) spec.reps = *reps;
            if (sim_seed) spec.seed = *sim_seed;
            spec.threads = threads;
            if (sim.tau) spec.options.tau = sim.tau;
            if (simulate->count("--threshold-t")) spec.options.threshold_t = sim.threshold_t;
            if (sim.mk) spec.options.mk = sim.mk;
            if (simulate->count("--restarts")) spec.options.kmeans.restarts = sim.restarts;
            const pcc::ExperimentResult result = pcc::run_experiment(spec);
            emit_csv(sim.out, [&](std::ostream& o) { pcc::write_summary_csv(o, result.summary); });
            if (!reps_out.empty()) {
                auto f = open_out(reps_out);
                pcc::write_reps_csv(f, result.reps);
            }
            if (!sim.svg.empty()) {
                auto f = open_out(sim.svg);
                pcc::write_summary_svg(f, result.summary, "Experiment " + spec.id);
            }
        } else if (*sweep_mk || *sweep_tau) {
            const bool mk = sweep_mk->parsed();
            const Common& c = mk ? smk : stau;
            pcc::EdgeListOptions eo;
            eo.ids = parse_ids(mk ? mk_ids : tau_ids);
            const pcc::Graph g = pcc::load_edge_list(mk ? mk_graph : tau_graph, eo);
            const pcc::LabelVector truth = pcc::load_labels(mk ? mk_labels : tau_labels, g);
            const pcc::Method method = pcc::parse_method(c.method);
            pcc::MethodOptions opts = method_options(c);
            std::vector<pcc::SweepRow> rows;
            if (mk) {
                opts.mk.reset();
                std::vector<int> values;
                for (double v : parse_grid(mk_grid)) values.push_back(static_cast<int>(v));
                rows = pcc::sweep_mk(g, truth, c.k, method, values, opts);
            } else {
                rows = pcc::sweep_tau(g, truth, c.k, method, parse_grid(tau_grid), opts);
            }
            emit_csv(c.out, [&](std::ostream& o) { pcc::write_sweep_csv(o, rows); });
            if (!c.svg.empty()) {
                auto f = open_out(c.svg);
                pcc::write_sweep_svg(f, rows, mk ? "Mismatches by M_k" : "Mismatches by tau");
            }
        } else if (*oracle) {
            std::vector<std::pair<std::string, pcc::DcsbmParams>> models;
            if (!params_file.empty())
                models.emplace_back(params_file, pcc::params_from_json(read_file(params_file), oracle_seed));
            if (figure_one) models.emplace_back("figure-one", pcc::figure_one_params(oracle_seed));
            for (int d = 0; d < draws; ++d)
                models.emplace_back("random-" + std::to_string(d),
                                    pcc::random_params(oracle_seed + static_cast<std::uint64_t>(d)));
            if (models.empty()) throw pcc::InputError("give --params, --figure-one or --random N");
            bool all_ok = true;
            for (const auto& [name, params] : models) {
                params.validate();
                for (const auto& w : params.warnings()) std::printf("%s: warning: %s\n", name.c_str(), w.c_str());
                const double tau = oracle_tau.value_or(pcc::build_omega(params).rowwise().sum().mean());
                const pcc::IdealReport a = pcc::verify_ideal_pcc(params);
                const pcc::IdealReport b = pcc::verify_ideal_npcc(params, tau);
                const pcc::PopulationModel pop = pcc::population_model(params, tau);
                const std::string tag = " (n=" + std::to_string(params.n) + ", K=" + std::to_string(params.k) + ")";
                print_report(name + tag + " pcc", a);
                print_report(name + tag + " npcc", b);
                std::printf("%-28s laplacian identity gap=%.3g\n", (name + tag).c_str(), pop.construction_gap());
                all_ok = all_ok && a.passed && b.passed && pop.construction_gap() < 1e-10;
            }
            std::printf("%s\n", all_ok ? "all population checks passed" : "population checks FAILED");
            if (!all_ok) return kNumericalError;
        }
    } catch (const pcc::InputError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kInputError;
    } catch (const pcc::NumericalError& e) {
        std::cerr << "numerical failure: " << e.what() << '\n';
        return kNumericalError;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kInputError;
    }
    return kOk;
}
