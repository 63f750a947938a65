#include "pcc/harness.hpp"

#include "pcc/errors.hpp"

#include <json.hpp>

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <map>
#include <mutex>
#include <ostream>
#include <sstream>
#include <thread>

namespace pcc {

using Eigen::Index;
using Eigen::MatrixXd;
using Eigen::VectorXd;
using json = nlohmann::json;

namespace {

std::string fmt(double v) {
    if (std::isnan(v)) return "nan";
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.10g", v);
    return buf;
}

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
}

std::vector<double> range(double lo, double hi, double step = 1.0) {
    std::vector<double> v;
    for (double x = lo; x <= hi + 1e-9; x += step) v.push_back(x);
    return v;
}

MatrixXd two_by_two(double a, double b, double c) {
    MatrixXd p(2, 2);
    p << a, b, b, c;
    return p;
}

VectorXd theta_by_label(const LabelVector& labels, const std::vector<double>& values) {
    VectorXd theta(static_cast<Index>(labels.size()));
    for (std::size_t i = 0; i < labels.size(); ++i) theta[static_cast<Index>(i)] = values.at(labels.values[i]);
    return theta;
}

VectorXd theta_power(int n, double exponent) {
    VectorXd theta(n);
    for (int i = 0; i < n; ++i) theta[i] = 0.4 + 0.5 * std::pow(static_cast<double>(i + 1) / n, exponent);
    return theta;
}

int as_int(double v, const std::string& what) {
    const double r = std::round(v);
    if (std::abs(v - r) > 1e-9 || r < 1) throw InputError(what + " must be a positive integer, got " + fmt(v));
    return static_cast<int>(r);
}

const std::vector<std::string> kBuiltin{"1a", "1b", "2a", "2b", "2c", "2d", "2e", "2f", "3"};

ClusterResult score_detection(const Detection& det, const LabelVector& truth, int k) {
    const LabelVector kept = det.restrict(truth);
    return align_and_score(det.labels, kept, std::max(k, kept.num_classes()));
}

}  // namespace

void ExperimentSpec::validate() const {
    if (reps < 1) throw InputError("no repetitions");
    if (grid.empty()) throw InputError("experiment grid is empty");
    if (methods.empty()) throw InputError("no methods selected");
    if (threads < 1) throw InputError("threads must be at least 1");
    if (id == "custom") {
        if (custom_params.empty()) throw InputError("custom experiment needs \"params\"");
    } else if (std::find(kBuiltin.begin(), kBuiltin.end(), id) == kBuiltin.end()) {
        throw InputError("unknown experiment id '" + id + "'");
    }
}

ExperimentSpec builtin_spec(const std::string& id) {
    ExperimentSpec s;
    s.id = id;
    if (id == "1a" || id == "1b") {
        s.grid = range(100, 600, 100);
    } else if (id == "2a") {
        s.grid_param = "a0";
        s.grid = range(1, 8);
    } else if (id == "2b") {
        s.grid_param = "b0";
        for (int i = 1; i <= 9; ++i) s.grid.push_back(i / 20.0);
        s.grid.push_back(12 / 20.0);
    } else if (id == "2c") {
        s.grid_param = "c0";
        s.grid = range(1, 12);
    } else if (id == "2d" || id == "2e" || id == "2f") {
        s.grid_param = "c0";
        s.grid = range(1, 8);
    } else if (id == "3") {
        s.grid = {500, 1000, 2000, 3000, 4000};
        s.reps = 10;
    } else {
        throw InputError("unknown experiment id '" + id + "' (expected 1a, 1b, 2a..2f or 3)");
    }
    return s;
}

DcsbmParams experiment_params(const ExperimentSpec& spec, double value, std::uint64_t seed) {
    DcsbmParams p;
    const std::string& id = spec.id;
    if (id == "custom") {
        json doc;
        try {
            doc = json::parse(spec.custom_params);
        } catch (const json::exception& e) {
            throw InputError(std::string("custom params: ") + e.what());
        }
        if (spec.grid_param == "n" || spec.grid_param == "K")
            doc[spec.grid_param] = as_int(value, spec.grid_param);
        else
            doc[spec.grid_param] = value;
        p = params_from_json(doc.dump(), seed);
    } else if (id == "1a" || id == "1b" || id == "3") {
        p.n = as_int(value, "n");
        if (id == "1a") {
            p.k = 2;
            p.p = two_by_two(0.9, 0.3, 0.8);
        } else if (id == "1b") {
            p.k = 3;
            p.p = MatrixXd::Constant(3, 3, 0.3);
            p.p.diagonal() << 0.9, 0.8, 0.7;
        } else {
            p.k = 4;
            p.p = MatrixXd::Constant(4, 4, 0.5);
            p.p.diagonal().setOnes();
        }
        p.labels = equal_probability_labels(p.n, p.k, seed);
        const std::vector<double> theta = id == "1a"   ? std::vector<double>{0.2, 0.6}
                                          : id == "1b" ? std::vector<double>{0.2, 0.4, 0.8}
                                                       : std::vector<double>{0.2, 0.4, 0.6, 0.8};
        p.theta = theta_by_label(p.labels, theta);
    } else {
        p.n = 400;
        p.k = 2;
        if (id == "2a") {
            p.p = two_by_two(0.9, 0.4, 0.8);
            p.labels = equal_probability_labels(p.n, 2, seed);
            p.theta = theta_by_label(p.labels, {1.0, 1.0 / value});
        } else if (id == "2b") {
            p.p = two_by_two(0.3, value, 0.3);
            p.labels = block_labels({p.n / 2, p.n - p.n / 2});
            p.theta = theta_by_label(p.labels, {0.4, 0.6});
        } else {
            const int c0 = as_int(value, "c0");
            const int n1 = static_cast<int>(std::lround(static_cast<double>(p.n) / (c0 + 1)));
            p.p = two_by_two(0.9, 0.4, 0.8);
            p.labels = block_labels({n1, p.n - n1});
            if (id == "2c")
                p.theta = theta_by_label(p.labels, {0.4, 0.6});
            else
                p.theta = theta_power(p.n, id == "2d" ? 1.0 : id == "2e" ? 2.0 : 3.0);
        }
    }
    p.validate();
    return p;
}

ExperimentSpec spec_from_json(const std::string& text) {
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::exception& e) {
        throw InputError(std::string("experiment spec: ") + e.what());
    }
    if (!doc.is_object()) throw InputError("experiment spec must be a JSON object");
    try {
        const std::string id = doc.value("id", std::string("custom"));
        ExperimentSpec s;
        if (id == "custom") {
            s.id = "custom";
            if (!doc.contains("params")) throw InputError("custom experiment needs \"params\"");
            s.custom_params = doc["params"].is_string() ? doc["params"].get<std::string>() : doc["params"].dump();
            s.grid_param = doc.value("grid_param", std::string("n"));
            s.reps = 100;
        } else {
            s = builtin_spec(id);
        }
        if (doc.contains("grid")) s.grid = doc["grid"].get<std::vector<double>>();
        if (doc.contains("reps")) s.reps = doc["reps"].get<int>();
        if (doc.contains("seed")) s.seed = doc["seed"].get<std::uint64_t>();
        if (doc.contains("threads")) s.threads = doc["threads"].get<int>();
        if (doc.contains("methods")) {
            s.methods.clear();
            for (const auto& m : doc["methods"]) s.methods.push_back(parse_method(m.get<std::string>()));
        }
        if (doc.contains("tau")) s.options.tau = doc["tau"].get<double>();
        if (doc.contains("threshold_t")) s.options.threshold_t = doc["threshold_t"].get<double>();
        if (doc.contains("mk")) s.options.mk = doc["mk"].get<int>();
        if (doc.contains("restarts")) s.options.kmeans.restarts = doc["restarts"].get<int>();
        s.validate();
        return s;
    } catch (const json::exception& e) {
        throw InputError(std::string("experiment spec: ") + e.what());
    }
}

ExperimentResult run_experiment(const ExperimentSpec& spec) {
    spec.validate();
    const std::size_t n_grid = spec.grid.size(), n_methods = spec.methods.size();
    const std::size_t n_reps = static_cast<std::size_t>(spec.reps);
    const std::size_t tasks = n_grid * n_reps;
    // slots[(g * reps + r) * methods + m]
    std::vector<RepRow> slots(tasks * n_methods);

    // Invalid parameters are a spec error, not a per-rep failure.
    for (double v : spec.grid) experiment_params(spec, v, spec.seed);

    auto run_task = [&](std::size_t t) {
        const std::size_t gi = t / n_reps;
        const int rep = static_cast<int>(t % n_reps);
        const double value = spec.grid[gi];
        const std::uint64_t seed = spec.seed + static_cast<std::uint64_t>(rep);
        RepRow* rows = &slots[t * n_methods];
        for (std::size_t m = 0; m < n_methods; ++m) {
            rows[m].value = value;
            rows[m].method = spec.methods[m];
            rows[m].rep = rep;
            rows[m].seed = seed;
        }
        DcsbmParams params;
        Graph g;
        try {
            params = experiment_params(spec, value, seed);
            g = sample_adjacency(params, splitmix64(seed));
        } catch (const std::exception& e) {
            for (std::size_t m = 0; m < n_methods; ++m) {
                rows[m].failed = true;
                rows[m].message = e.what();
            }
            return;
        }
        MethodOptions opts = spec.options;
        opts.kmeans.seed = seed;
        for (std::size_t m = 0; m < n_methods; ++m) {
            RepRow& row = rows[m];
            try {
                const Detection det = detect_communities(g, params.k, spec.methods[m], opts);
                const ClusterResult score = score_detection(det, params.labels, params.k);
                row.error_rate = score.error_rate;
                row.mismatches = score.mismatches;
                row.scored = det.kept.size();
                row.seconds = det.elapsed_seconds;
            } catch (const std::exception& e) {
                row.failed = true;
                row.message = e.what();
            }
        }
    };

    const std::size_t workers = std::min<std::size_t>(static_cast<std::size_t>(spec.threads), tasks);
    if (workers <= 1) {
        for (std::size_t t = 0; t < tasks; ++t) run_task(t);
    } else {
        std::atomic<std::size_t> next{0};
        std::vector<std::thread> pool;
        for (std::size_t w = 0; w < workers; ++w)
            pool.emplace_back([&] {
                for (std::size_t t = next++; t < tasks; t = next++) run_task(t);
            });
        for (auto& th : pool) th.join();
    }

    ExperimentResult result;
    result.reps.reserve(slots.size());
    for (std::size_t gi = 0; gi < n_grid; ++gi) {
        for (std::size_t m = 0; m < n_methods; ++m) {
            SummaryRow s;
            s.experiment = spec.id;
            s.grid_param = spec.grid_param;
            s.value = spec.grid[gi];
            s.method = spec.methods[m];
            s.reps = spec.reps;
            std::vector<double> errors, seconds;
            for (std::size_t r = 0; r < n_reps; ++r) {
                const RepRow& row = slots[((gi * n_reps) + r) * n_methods + m];
                result.reps.push_back(row);
                if (row.failed) {
                    ++s.failures;
                    continue;
                }
                errors.push_back(row.error_rate);
                seconds.push_back(row.seconds);
            }
            const double count = static_cast<double>(errors.size());
            if (errors.empty()) {
                s.mean_error = s.std_error = s.mean_seconds = std::numeric_limits<double>::quiet_NaN();
            } else {
                double sum = 0.0, tsum = 0.0;
                for (std::size_t i = 0; i < errors.size(); ++i) {
                    sum += errors[i];
                    tsum += seconds[i];
                }
                s.mean_error = sum / count;
                s.mean_seconds = tsum / count;
                double ss = 0.0;
                for (double e : errors) ss += (e - s.mean_error) * (e - s.mean_error);
                s.std_error = errors.size() > 1 ? std::sqrt(ss / (count - 1.0)) : 0.0;
            }
            result.summary.push_back(s);
        }
    }
    return result;
}

void write_summary_csv(std::ostream& out, const std::vector<SummaryRow>& rows) {
    out << "experiment,grid_param,value,method,mean_error,std_error,mean_seconds,failures,reps\n";
    for (const auto& r : rows)
        out << r.experiment << ',' << r.grid_param << ',' << fmt(r.value) << ',' << method_name(r.method) << ','
            << fmt(r.mean_error) << ',' << fmt(r.std_error) << ',' << fmt(r.mean_seconds) << ',' << r.failures
            << ',' << r.reps << '\n';
}

void write_reps_csv(std::ostream& out, const std::vector<RepRow>& rows) {
    out << "value,method,rep,seed,error_rate,mismatches,n,seconds,failed,message\n";
    for (const auto& r : rows) {
        std::string msg = r.message;
        std::replace(msg.begin(), msg.end(), '"', '\'');
        out << fmt(r.value) << ',' << method_name(r.method) << ',' << r.rep << ',' << r.seed << ','
            << fmt(r.error_rate) << ',' << r.mismatches << ',' << r.scored << ',' << fmt(r.seconds) << ','
            << (r.failed ? 1 : 0) << ",\"" << msg << "\"\n";
    }
}

namespace {

struct SweepInput {
    Graph graph;
    LabelVector truth;
    std::vector<int> kept;
};

SweepInput sweep_input(const Graph& g, const LabelVector& truth, int k) {
    if (truth.size() != g.size())
        throw InputError("truth has " + std::to_string(truth.size()) + " labels for " + std::to_string(g.size()) +
                         " nodes");
    if (k < 2) throw InputError("community detection needs K >= 2");
    if (g.empty()) throw InputError("graph is empty");
    if (is_connected(g)) {
        SweepInput in{g, truth, {}};
        in.kept.resize(g.size());
        for (std::size_t i = 0; i < g.size(); ++i) in.kept[i] = static_cast<int>(i);
        return in;
    }
    Component c = largest_connected_component(g, truth);
    return {std::move(c.graph), std::move(*c.labels), std::move(c.original_index)};
}

}  // namespace

std::vector<SweepRow> sweep_mk(const Graph& g, const LabelVector& truth, int k, Method method,
                               const std::vector<int>& grid, const MethodOptions& opts) {
    if (method != Method::PccStar && method != Method::NpccStar)
        throw InputError("M_k sweeps take pcc* or npcc*");
    if (grid.empty()) throw InputError("M_k grid is empty");
    opts.validate(k);
    const SweepInput in = sweep_input(g, truth, k);
    const int n = static_cast<int>(in.graph.size());
    for (int mk : grid) {
        if (mk < k) throw InputError("M_k = " + std::to_string(mk) + " must be at least K = " + std::to_string(k));
        if (mk > n)
            throw InputError("M_k = " + std::to_string(mk) + " exceeds node count " + std::to_string(n));
    }
    const int top = *std::max_element(grid.begin(), grid.end());
    const EigenBasis basis = method == Method::PccStar
                                 ? adjacency_basis(in.graph, top, opts.eigen)
                                 : normalized_laplacian_basis(in.graph, opts.tau.value_or(default_tau(in.graph)),
                                                              top, opts.eigen);
    const int classes = std::max(k, in.truth.num_classes());
    std::vector<SweepRow> rows;
    for (int mk : grid) {
        const LabelVector est = cluster_leading(basis, mk, k, opts.kmeans);
        const ClusterResult score = align_and_score(est, in.truth, classes);
        rows.push_back({"mk", method, "mk", static_cast<double>(mk), score.mismatches, in.truth.size(),
                        score.error_rate, false});
    }
    return rows;
}

std::vector<SweepRow> sweep_tau(const Graph& g, const LabelVector& truth, int k, Method method,
                                const std::vector<double>& grid, const MethodOptions& opts) {
    if (method != Method::Npcc && method != Method::Rsc) throw InputError("tau sweeps take npcc or rsc");
    if (truth.size() != g.size())
        throw InputError("truth has " + std::to_string(truth.size()) + " labels for " + std::to_string(g.size()) +
                         " nodes");
    std::vector<SweepRow> rows;
    auto run = [&](std::optional<double> tau) {
        MethodOptions o = opts;
        o.tau = tau;
        const Detection det = detect_communities(g, k, method, o);
        const ClusterResult score = score_detection(det, truth, k);
        rows.push_back({"tau", method, "tau", *det.tau, score.mismatches, det.kept.size(), score.error_rate,
                        !tau.has_value()});
    };
    for (double tau : grid) run(tau);
    run(std::nullopt);
    return rows;
}

void write_sweep_csv(std::ostream& out, const std::vector<SweepRow>& rows) {
    out << "sweep,method,param,value,mismatches,n,error_rate,default\n";
    for (const auto& r : rows)
        out << r.sweep << ',' << method_name(r.method) << ',' << r.param << ',' << fmt(r.value) << ','
            << r.mismatches << ',' << r.scored << ',' << fmt(r.error_rate) << ',' << (r.is_default ? 1 : 0)
            << '\n';
}

namespace {

struct Series {
    std::string name;
    std::vector<std::pair<double, double>> points;
};

std::string xml_escape(const std::string& s) {
    std::string out;
    for (char c : s) {
        switch (c) {
        case '<': out += "&lt;"; break;
        case '>': out += "&gt;"; break;
        case '&': out += "&amp;"; break;
        case '"': out += "&quot;"; break;
        default: out += c;
        }
    }
    return out;
}

void line_chart(std::ostream& out, const std::vector<Series>& series, const std::string& title,
                const std::string& xlabel, const std::string& ylabel) {
    static const char* colors[] = {"#1f77b4", "#d62728", "#2ca02c", "#ff7f0e",
                                   "#9467bd", "#8c564b", "#e377c2", "#17becf"};
    const double w = 640, h = 420, left = 70, right = 150, top = 40, bottom = 50;
    double xmin = std::numeric_limits<double>::infinity(), xmax = -xmin, ymax = 0.0;
    for (const auto& s : series)
        for (auto [x, y] : s.points) {
            xmin = std::min(xmin, x);
            xmax = std::max(xmax, x);
            if (std::isfinite(y)) ymax = std::max(ymax, y);
        }
    if (!std::isfinite(xmin)) xmin = 0.0, xmax = 1.0;
    if (xmax == xmin) xmax = xmin + 1.0;
    if (ymax <= 0.0) ymax = 1.0;
    const double pw = w - left - right, ph = h - top - bottom;
    auto px = [&](double x) { return left + (x - xmin) / (xmax - xmin) * pw; };
    auto py = [&](double y) { return top + ph - y / ymax * ph; };

    out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << w << "\" height=\"" << h
        << "\" font-family=\"sans-serif\" font-size=\"12\">\n";
    out << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    out << "<text x=\"" << w / 2 << "\" y=\"22\" text-anchor=\"middle\" font-size=\"14\">" << xml_escape(title)
        << "</text>\n";
    out << "<line x1=\"" << left << "\" y1=\"" << top + ph << "\" x2=\"" << left + pw << "\" y2=\"" << top + ph
        << "\" stroke=\"black\"/>\n";
    out << "<line x1=\"" << left << "\" y1=\"" << top << "\" x2=\"" << left << "\" y2=\"" << top + ph
        << "\" stroke=\"black\"/>\n";
    for (int i = 0; i <= 4; ++i) {
        const double y = ymax * i / 4.0, x = xmin + (xmax - xmin) * i / 4.0;
        out << "<text x=\"" << left - 6 << "\" y=\"" << py(y) + 4 << "\" text-anchor=\"end\">" << fmt(y)
            << "</text>\n";
        out << "<text x=\"" << px(x) << "\" y=\"" << top + ph + 18 << "\" text-anchor=\"middle\">" << fmt(x)
            << "</text>\n";
    }
    out << "<text x=\"" << left + pw / 2 << "\" y=\"" << h - 10 << "\" text-anchor=\"middle\">"
        << xml_escape(xlabel) << "</text>\n";
    out << "<text x=\"16\" y=\"" << top + ph / 2 << "\" text-anchor=\"middle\" transform=\"rotate(-90 16 "
        << top + ph / 2 << ")\">" << xml_escape(ylabel) << "</text>\n";
    for (std::size_t s = 0; s < series.size(); ++s) {
        const char* color = colors[s % 8];
        out << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"2\" points=\"";
        for (auto [x, y] : series[s].points)
            if (std::isfinite(y)) out << fmt(px(x)) << ',' << fmt(py(y)) << ' ';
        out << "\"/>\n";
        const double ly = top + 10 + 18.0 * static_cast<double>(s);
        out << "<line x1=\"" << left + pw + 12 << "\" y1=\"" << ly << "\" x2=\"" << left + pw + 32 << "\" y2=\""
            << ly << "\" stroke=\"" << color << "\" stroke-width=\"2\"/>\n";
        out << "<text x=\"" << left + pw + 38 << "\" y=\"" << ly + 4 << "\">" << xml_escape(series[s].name)
            << "</text>\n";
    }
    out << "</svg>\n";
}

}  // namespace

void write_summary_svg(std::ostream& out, const std::vector<SummaryRow>& rows, const std::string& title) {
    std::vector<Series> series;
    for (const auto& r : rows) {
        const std::string name(method_name(r.method));
        auto it = std::find_if(series.begin(), series.end(), [&](const Series& s) { return s.name == name; });
        if (it == series.end()) it = series.insert(series.end(), Series{name, {}});
        it->points.emplace_back(r.value, r.mean_error);
    }
    line_chart(out, series, title, rows.empty() ? "" : rows.front().grid_param, "mean error rate");
}

void write_sweep_svg(std::ostream& out, const std::vector<SweepRow>& rows, const std::string& title) {
    std::vector<Series> series;
    for (const auto& r : rows) {
        if (r.is_default) continue;
        const std::string name(method_name(r.method));
        auto it = std::find_if(series.begin(), series.end(), [&](const Series& s) { return s.name == name; });
        if (it == series.end()) it = series.insert(series.end(), Series{name, {}});
        it->points.emplace_back(r.value, static_cast<double>(r.mismatches));
    }
    line_chart(out, series, title, rows.empty() ? "" : rows.front().param, "mismatches");
}

void write_matrix_csv(std::ostream& out, const MatrixXd& m) {
    for (Index i = 0; i < m.rows(); ++i) {
        for (Index j = 0; j < m.cols(); ++j) out << (j ? "," : "") << fmt(m(i, j));
        out << '\n';
    }
}

std::string detection_summary(const Graph& g, int k, const Detection& det, const std::optional<LabelVector>& truth,
                              const LoadStats* stats) {
    json j;
    j["method"] = std::string(method_name(det.method));
    j["k"] = k;
    j["nodes"] = g.size();
    j["edges"] = g.edge_count();
    j["component_nodes"] = det.kept.size();
    j["dropped_nodes"] = det.dropped;
    j["columns"] = det.columns;
    if (det.tau) j["tau"] = *det.tau;
    if (det.gap) j["gap"] = *det.gap;
    j["eigenvalues"] = det.eigenvalues;
    j["seconds"] = det.elapsed_seconds;
    if (stats) {
        j["self_loops"] = stats->self_loops;
        j["duplicate_edges"] = stats->duplicate_edges;
    }
    std::vector<int> sizes(static_cast<std::size_t>(k), 0);
    for (int l : det.labels.values) ++sizes[static_cast<std::size_t>(l)];
    j["community_sizes"] = sizes;

    if (truth) {
        const ClusterResult score = score_detection(det, *truth, k);
        json s;
        s["mismatches"] = score.mismatches;
        s["scored"] = det.kept.size();
        s["error_rate"] = score.error_rate;
        s["summary"] = std::to_string(score.mismatches) + "/" + std::to_string(det.kept.size());
        // Plug-in theta_i = d_i / sqrt(sum d); meaningful up to constants.
        DcsbmParams plug;
        plug.n = static_cast<int>(g.size());
        plug.theta.resize(plug.n);
        double total = 0.0;
        for (std::size_t i = 0; i < g.size(); ++i) total += g.degree(i);
        if (total > 0.0 && plug.n >= 2) {
            for (int i = 0; i < plug.n; ++i) plug.theta[i] = g.degree(static_cast<std::size_t>(i)) / std::sqrt(total);
            s["error_bound_rate"] = error_bound(plug);
        }
        j["score"] = s;
    }
    return j.dump(2);
}

std::string run_detect(const DetectRequest& request) {
    LoadStats stats;
    const Graph g = load_edge_list(request.graph, request.edge_options, &stats);
    std::optional<LabelVector> truth;
    if (request.truth) truth = load_labels(*request.truth, g, request.edge_options.comment_prefix);
    const Detection det = detect_communities(g, request.k, request.method, request.options);
    if (request.labels_out) {
        std::ofstream out(*request.labels_out);
        if (!out) throw InputError("cannot write " + request.labels_out->string());
        for (std::size_t i = 0; i < det.kept.size(); ++i)
            out << g.node_id(static_cast<std::size_t>(det.kept[i])) << ' ' << det.labels.values[i] + 1 << '\n';
    }
    if (request.embedding_out) {
        std::ofstream out(*request.embedding_out);
        if (!out) throw InputError("cannot write " + request.embedding_out->string());
        write_matrix_csv(out, det.embedding);
    }
    return detection_summary(g, request.k, det, truth, &stats);
}

}  // namespace pcc
