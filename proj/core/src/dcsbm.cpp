#include "pcc/dcsbm.hpp"

#include "pcc/errors.hpp"
#include "pcc/random.hpp"

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <queue>
#include <sstream>

namespace pcc {

using Eigen::Index;
using Eigen::MatrixXd;
using Eigen::VectorXd;
using nlohmann::json;

void DcsbmParams::validate() const {
    if (n < 1) throw InputError("DCSBM needs n >= 1");
    if (k < 1) throw InputError("DCSBM needs K >= 1");
    if (p.rows() != k || p.cols() != k)
        throw InputError("mixing matrix must be " + std::to_string(k) + "x" + std::to_string(k));
    for (Index i = 0; i < k; ++i)
        for (Index j = 0; j < k; ++j) {
            if (!(p(i, j) >= 0.0 && p(i, j) <= 1.0))
                throw InputError("mixing matrix entries must lie in [0, 1]");
            if (p(i, j) != p(j, i)) throw InputError("mixing matrix must be symmetric");
        }
    if (theta.size() != n) throw InputError("theta must have n entries");
    if (static_cast<int>(labels.size()) != n) throw InputError("labels must have n entries");
    std::vector<int> seen(static_cast<std::size_t>(k), 0);
    for (int g : labels.values) {
        if (g < 0 || g >= k) throw InputError("community label out of range");
        seen[g] = 1;
    }
    if (std::find(seen.begin(), seen.end(), 0) != seen.end())
        throw InputError("every community must contain at least one node");
    for (Index i = 0; i < n; ++i)
        if (!(theta[i] > 0.0)) throw InputError("theta entries must be strictly positive");
    // theta_i theta_j P_gh <= 1 for all pairs: check the largest theta per community
    VectorXd tmax = VectorXd::Zero(k);
    for (Index i = 0; i < n; ++i) tmax[labels.values[i]] = std::max(tmax[labels.values[i]], theta[i]);
    for (Index a = 0; a < k; ++a)
        for (Index b = 0; b < k; ++b)
            if (tmax[a] * tmax[b] * p(a, b) > 1.0)
                throw InputError("edge probability theta_i theta_j P exceeds 1 between communities " +
                                 std::to_string(a + 1) + " and " + std::to_string(b + 1));
}

std::vector<std::string> DcsbmParams::warnings() const {
    std::vector<std::string> out;
    Eigen::JacobiSVD<MatrixXd> svd(p);
    const auto& sv = svd.singularValues();
    if (sv.size() == 0 || sv[sv.size() - 1] <= 1e-12 * std::max(1e-300, sv[0]))
        out.emplace_back("mixing matrix is singular");
    // irreducible <=> support graph of P is connected
    std::vector<char> seen(static_cast<std::size_t>(k), 0);
    std::queue<int> q;
    if (k > 0) {
        q.push(0);
        seen[0] = 1;
    }
    while (!q.empty()) {
        int a = q.front();
        q.pop();
        for (int b = 0; b < k; ++b)
            if (!seen[b] && p(a, b) > 0.0) {
                seen[b] = 1;
                q.push(b);
            }
    }
    if (std::find(seen.begin(), seen.end(), 0) != seen.end())
        out.emplace_back("mixing matrix is reducible");
    return out;
}

MatrixXd build_omega(const DcsbmParams& params) {
    params.validate();
    const Index n = params.n;
    MatrixXd omega(n, n);
    for (Index j = 0; j < n; ++j)
        for (Index i = 0; i < n; ++i)
            omega(i, j) = params.theta[i] * params.theta[j] *
                          params.p(params.labels.values[i], params.labels.values[j]);
    return omega;
}

int numerical_rank(const MatrixXd& symmetric) {
    Eigen::SelfAdjointEigenSolver<MatrixXd> es(symmetric, Eigen::EigenvaluesOnly);
    const VectorXd a = es.eigenvalues().cwiseAbs();
    if (a.size() == 0) return 0;
    const double threshold = 1e-8 * a.maxCoeff();
    return static_cast<int>((a.array() > threshold).count());
}

Graph sample_adjacency(const DcsbmParams& params, std::uint64_t seed) {
    params.validate();
    Rng rng(seed);
    std::vector<std::pair<int, int>> edges;
    const auto& g = params.labels.values;
    for (int i = 0; i < params.n; ++i)
        for (int j = i + 1; j < params.n; ++j) {
            const double prob = params.theta[i] * params.theta[j] * params.p(g[i], g[j]);
            if (rng.uniform() < prob) edges.emplace_back(i, j);
        }
    return Graph::from_edges(static_cast<std::size_t>(params.n), edges);
}

double PopulationModel::construction_gap() const {
    return (laplacian - laplacian_product).cwiseAbs().maxCoeff();
}

PopulationModel population_model(const DcsbmParams& params, double tau) {
    if (!(tau >= 0.0)) throw InputError("tau must be nonnegative");
    PopulationModel pop;
    pop.omega = build_omega(params);
    pop.tau = tau;
    const Index n = params.n, k = params.k;
    const auto& g = params.labels.values;

    pop.expected_degree = pop.omega.rowwise().sum();
    for (Index i = 0; i < n; ++i)
        if (!(pop.expected_degree[i] > 0.0))
            throw InputError("node " + std::to_string(i + 1) + " has zero expected degree");
    if (tau == 0.0 && (pop.expected_degree.array() <= 0.0).any())
        throw InputError("zero expected degree with tau = 0");

    const VectorXd s = (pop.expected_degree.array() + tau).rsqrt();
    pop.laplacian = s.asDiagonal() * pop.omega * s.asDiagonal();

    // D_P(k,k) = sum_j (P Z' Theta)_kj = sum_j P(k, g_j) theta_j
    VectorXd mass = VectorXd::Zero(k);
    for (Index j = 0; j < n; ++j) mass[g[j]] += params.theta[j];
    pop.d_p = params.p * mass;
    const VectorXd dp_half = pop.d_p.array().rsqrt();
    pop.p_tilde = dp_half.asDiagonal() * params.p * dp_half.asDiagonal();

    pop.theta_tau = params.theta.array() * pop.expected_degree.array() /
                    (pop.expected_degree.array() + tau);
    pop.theta_tilde = pop.theta_tau.cwiseSqrt();
    pop.laplacian_product.resize(n, n);
    for (Index j = 0; j < n; ++j)
        for (Index i = 0; i < n; ++i)
            pop.laplacian_product(i, j) = pop.theta_tilde[i] * pop.theta_tilde[j] * pop.p_tilde(g[i], g[j]);

    VectorXd block = VectorXd::Zero(k);
    for (Index i = 0; i < n; ++i) block[g[i]] += pop.theta_tau[i];  // ||theta~^(k)||^2
    pop.d_tilde = block.cwiseSqrt() / pop.theta_tilde.norm();
    return pop;
}

MatrixXd gamma_tilde(const DcsbmParams& params, const PopulationModel& pop) {
    const Index n = params.n, k = params.k;
    MatrixXd gamma = MatrixXd::Zero(n, k);
    for (Index i = 0; i < n; ++i) gamma(i, params.labels.values[i]) = pop.theta_tilde[i];
    for (Index c = 0; c < k; ++c) gamma.col(c) /= gamma.col(c).norm();
    return gamma;
}

MatrixXd dbar_p_dbar(const DcsbmParams& params) {
    VectorXd block = VectorXd::Zero(params.k);
    for (Index i = 0; i < params.n; ++i) block[params.labels.values[i]] += params.theta[i] * params.theta[i];
    const VectorXd dbar = block.cwiseSqrt() / params.theta.norm();
    return dbar.asDiagonal() * params.p * dbar.asDiagonal();
}

double eigsp(const MatrixXd& b) {
    if (b.rows() < 2) return std::numeric_limits<double>::infinity();
    Eigen::SelfAdjointEigenSolver<MatrixXd> es(b, Eigen::EigenvaluesOnly);
    const VectorXd& ev = es.eigenvalues();  // ascending
    double gap = std::numeric_limits<double>::infinity();
    for (Index i = 0; i + 1 < ev.size(); ++i) gap = std::min(gap, ev[i + 1] - ev[i]);
    return gap;
}

namespace {

void check_rows(const MatrixXd& x_star, const LabelVector& truth, IdealReport& report) {
    const Index n = x_star.rows();
    report.max_within = 0.0;
    report.min_across = std::numeric_limits<double>::infinity();
    for (Index i = 0; i < n; ++i)
        for (Index j = i + 1; j < n; ++j) {
            const double d = (x_star.row(i) - x_star.row(j)).norm();
            if (truth.values[i] == truth.values[j])
                report.max_within = std::max(report.max_within, d);
            else
                report.min_across = std::min(report.min_across, d);
        }
    if (report.max_within >= 1e-8)
        report.failures.push_back("rows of one community differ by " + std::to_string(report.max_within));
    if (report.min_across <= 1e-4)
        report.failures.push_back("rows of different communities only " +
                                  std::to_string(report.min_across) + " apart");
}

void finish(IdealReport& report) {
    if (report.cluster.mismatches != 0)
        report.failures.push_back(std::to_string(report.cluster.mismatches) + " mismatched labels");
    report.passed = report.failures.empty();
}

VectorXd by_magnitude(const VectorXd& v) {
    const auto order = magnitude_order(v);
    VectorXd out(v.size());
    for (Index i = 0; i < v.size(); ++i) out[i] = v[order[i]];
    return out;
}

}  // namespace

IdealReport verify_ideal_pcc(const DcsbmParams& params, const KMeansConfig& kmeans_cfg) {
    const MatrixXd omega = build_omega(params);
    IdealReport report;
    EigenOptions eig;
    eig.dense_max = std::numeric_limits<Index>::max();
    const EigenBasis basis = top_eigenpairs_symmetric(omega, params.k, eig);
    const Embedding emb = embed(basis);
    const auto km = kmeans(emb.X_star, params.k, kmeans_cfg);
    report.cluster = align_and_score(km.labels, params.labels, params.k);
    check_rows(emb.X_star, params.labels, report);

    Eigen::SelfAdjointEigenSolver<MatrixXd> small(dbar_p_dbar(params), Eigen::EigenvaluesOnly);
    const VectorXd predicted = by_magnitude(small.eigenvalues()) * params.theta.squaredNorm();
    report.eigenvalue_gap = (predicted - basis.values).cwiseAbs().maxCoeff();
    const double ref = std::max(1.0, std::abs(basis.values[0]));
    if (report.eigenvalue_gap > 1e-8 * ref)
        report.failures.push_back("Omega spectrum differs from ||theta||^2 eig(DPD) by " +
                                  std::to_string(report.eigenvalue_gap));
    finish(report);
    return report;
}

IdealReport verify_ideal_npcc(const DcsbmParams& params, double tau, const KMeansConfig& kmeans_cfg) {
    const PopulationModel pop = population_model(params, tau);
    IdealReport report;
    EigenOptions eig;
    eig.dense_max = std::numeric_limits<Index>::max();
    const EigenBasis basis = top_eigenpairs_colnorm(pop.laplacian, params.k, eig);
    const Embedding emb = embed(basis);
    const auto km = kmeans(emb.X_star, params.k, kmeans_cfg);
    report.cluster = align_and_score(km.labels, params.labels, params.k);
    check_rows(emb.X_star, params.labels, report);

    const MatrixXd normalized = column_normalize(pop.laplacian);
    const MatrixXd gamma = gamma_tilde(params, pop);
    const MatrixXd f = gamma.transpose() * normalized * gamma;
    report.intertwining_gap = (gamma * f - normalized * gamma).cwiseAbs().maxCoeff();
    if (report.intertwining_gap > 1e-8)
        report.failures.push_back("Gamma F differs from N Gamma by " +
                                  std::to_string(report.intertwining_gap));

    Eigen::EigenSolver<MatrixXd> small(f, false);
    const VectorXd predicted = by_magnitude(small.eigenvalues().real());
    report.eigenvalue_gap = (predicted - basis.values).cwiseAbs().maxCoeff();
    if (report.eigenvalue_gap > 1e-8)
        report.failures.push_back("N spectrum differs from eig(F) by " +
                                  std::to_string(report.eigenvalue_gap));
    finish(report);
    return report;
}

double error_bound(const DcsbmParams& params, double c) {
    if (params.n < 2) throw InputError("error bound needs n >= 2");
    const double n = params.n;
    const double l1 = params.theta.lpNorm<1>();
    const double l2sq = params.theta.squaredNorm();
    const double l3cube = params.theta.array().cube().sum();
    const double tmax = params.theta.maxCoeff();
    const double logn = std::log(n);
    const double first = 4.0 * std::sqrt(n * logn * tmax * l1 / (l2sq * l2sq));
    const double second = std::sqrt(n * c * logn * l1 * l3cube / (l2sq * l2sq * l2sq));
    const double err = 4.0 * (first + second) * (first + second);
    return err / n;
}

AssumptionReport check_assumptions(const DcsbmParams& params) {
    params.validate();
    AssumptionReport r;
    const double logn = std::log(static_cast<double>(params.n));
    const double l2sq = params.theta.squaredNorm();
    const double tmax = params.theta.maxCoeff(), tmin = params.theta.minCoeff();
    r.sparsity = logn * tmax * params.theta.lpNorm<1>() / (l2sq * l2sq);
    r.eigen_spacing = eigsp(dbar_p_dbar(params));
    VectorXd block = VectorXd::Zero(params.k);
    for (Index i = 0; i < params.n; ++i) block[params.labels.values[i]] += params.theta[i] * params.theta[i];
    block = block.cwiseSqrt();
    r.balance = block.maxCoeff() / block.minCoeff();
    r.heterogeneity_lhs = logn * tmax * tmax / tmin;
    r.heterogeneity_rhs = params.theta.array().cube().sum();
    return r;
}

LabelVector equal_probability_labels(int n, int k, std::uint64_t seed) {
    if (k < 1 || n < k) throw InputError("cannot place " + std::to_string(n) + " nodes in " +
                                         std::to_string(k) + " nonempty communities");
    Rng rng(seed);
    LabelVector out;
    out.values.resize(static_cast<std::size_t>(n));
    for (;;) {
        for (auto& v : out.values) v = static_cast<int>(rng.below(static_cast<std::uint64_t>(k)));
        if (out.distinct() == k) return out;
    }
}

LabelVector block_labels(const std::vector<int>& sizes) {
    LabelVector out;
    for (std::size_t c = 0; c < sizes.size(); ++c) {
        if (sizes[c] < 1) throw InputError("community sizes must be positive");
        out.values.insert(out.values.end(), static_cast<std::size_t>(sizes[c]), static_cast<int>(c));
    }
    return out;
}

DcsbmParams random_params(std::uint64_t seed, int max_n) {
    Rng rng(seed);
    DcsbmParams p;
    p.k = 2 + static_cast<int>(rng.below(3));
    const int lo = std::max(30, 10 * p.k);
    if (max_n < lo) throw InputError("max_n must be at least " + std::to_string(lo));
    p.n = lo + static_cast<int>(rng.below(static_cast<std::uint64_t>(max_n - lo + 1)));
    do {
        p.p = MatrixXd::Identity(p.k, p.k);
        for (int a = 0; a < p.k; ++a)
            for (int b = a + 1; b < p.k; ++b) p.p(a, b) = p.p(b, a) = 0.05 + 0.55 * rng.uniform();
    } while (Eigen::JacobiSVD<MatrixXd>(p.p).singularValues().minCoeff() < 0.05);
    p.theta.resize(p.n);
    for (int i = 0; i < p.n; ++i) p.theta[i] = 0.2 + 0.8 * rng.uniform();
    p.labels = equal_probability_labels(p.n, p.k, rng.next());
    return p;
}

DcsbmParams figure_one_params(std::uint64_t seed) {
    DcsbmParams p;
    p.n = 90;
    p.k = 3;
    p.p = MatrixXd::Constant(3, 3, 0.3);
    p.p.diagonal().setConstant(0.6);
    p.theta.resize(p.n);
    for (int i = 1; i <= p.n; ++i) p.theta[i - 1] = 0.3 + 0.7 * std::pow(static_cast<double>(i) / p.n, 2);
    p.labels = equal_probability_labels(p.n, p.k, seed);
    return p;
}

namespace {

MatrixXd parse_matrix(const json& j, int k) {
    MatrixXd p(k, k);
    if (!j.is_array()) throw InputError("\"P\" must be an array");
    if (j.size() == static_cast<std::size_t>(k) && j[0].is_array()) {
        for (int r = 0; r < k; ++r) {
            if (j[r].size() != static_cast<std::size_t>(k)) throw InputError("\"P\" row has wrong length");
            for (int c = 0; c < k; ++c) p(r, c) = j[r][c].get<double>();
        }
    } else if (j.size() == static_cast<std::size_t>(k * k)) {
        for (int r = 0; r < k; ++r)
            for (int c = 0; c < k; ++c) p(r, c) = j[r * k + c].get<double>();
    } else {
        throw InputError("\"P\" must hold K rows or K*K row-major values");
    }
    return p;
}

LabelVector parse_labels(const json& j, int n, int k, std::uint64_t seed) {
    if (j.is_array()) {
        LabelVector out;
        for (const auto& v : j) out.values.push_back(v.get<int>() - 1);
        return out;
    }
    const std::string kind = j.at("kind").get<std::string>();
    if (kind == "equal_probability")
        return equal_probability_labels(n, k, j.value("seed", seed));
    if (kind == "proportions") {
        std::vector<int> sizes;
        if (j.contains("sizes")) {
            sizes = j.at("sizes").get<std::vector<int>>();
        } else {
            const auto fr = j.at("fractions").get<std::vector<double>>();
            int used = 0;
            for (std::size_t c = 0; c + 1 < fr.size(); ++c) {
                sizes.push_back(static_cast<int>(std::lround(fr[c] * n)));
                used += sizes.back();
            }
            sizes.push_back(n - used);
        }
        return block_labels(sizes);
    }
    throw InputError("unknown label generator '" + kind + "'");
}

VectorXd parse_theta(const json& j, const LabelVector& labels, int n) {
    VectorXd theta(n);
    if (j.is_array()) {
        if (j.size() != static_cast<std::size_t>(n)) throw InputError("\"theta\" must have n entries");
        for (int i = 0; i < n; ++i) theta[i] = j[i].get<double>();
        return theta;
    }
    const std::string kind = j.at("kind").get<std::string>();
    if (kind == "constant") {
        theta.setConstant(j.at("value").get<double>());
    } else if (kind == "by_community") {
        const auto v = j.at("values").get<std::vector<double>>();
        for (int i = 0; i < n; ++i) {
            const int g = labels.values.at(static_cast<std::size_t>(i));
            if (g < 0 || static_cast<std::size_t>(g) >= v.size())
                throw InputError("\"theta\" by_community needs one value per community");
            theta[i] = v[static_cast<std::size_t>(g)];
        }
    } else if (kind == "power") {
        const double base = j.at("base").get<double>(), scale = j.at("scale").get<double>();
        const double expo = j.at("exponent").get<double>();
        for (int i = 1; i <= n; ++i) theta[i - 1] = base + scale * std::pow(static_cast<double>(i) / n, expo);
    } else {
        throw InputError("unknown theta generator '" + kind + "'");
    }
    return theta;
}

}  // namespace

DcsbmParams params_from_json(const std::string& text, std::uint64_t seed) {
    DcsbmParams p;
    try {
        const json doc = json::parse(text);
        p.n = doc.at("n").get<int>();
        p.k = doc.at("K").get<int>();
        p.p = parse_matrix(doc.at("P"), p.k);
        p.labels = parse_labels(doc.at("labels"), p.n, p.k, seed);
        if (static_cast<int>(p.labels.size()) != p.n) throw InputError("\"labels\" must have n entries");
        p.theta = parse_theta(doc.at("theta"), p.labels, p.n);
    } catch (const json::exception& e) {
        throw InputError(std::string("params JSON: ") + e.what());
    }
    p.validate();
    return p;
}

std::string params_to_json(const DcsbmParams& params) {
    json doc;
    doc["n"] = params.n;
    doc["K"] = params.k;
    json rows = json::array();
    for (Index r = 0; r < params.p.rows(); ++r) {
        json row = json::array();
        for (Index c = 0; c < params.p.cols(); ++c) row.push_back(params.p(r, c));
        rows.push_back(row);
    }
    doc["P"] = rows;
    doc["theta"] = std::vector<double>(params.theta.data(), params.theta.data() + params.theta.size());
    std::vector<int> one_based;
    for (int g : params.labels.values) one_based.push_back(g + 1);
    doc["labels"] = one_based;
    return doc.dump(2);
}

}  // namespace pcc
