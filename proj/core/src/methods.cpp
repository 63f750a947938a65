#include "pcc/methods.hpp"

#include "pcc/errors.hpp"

#include <array>
#include <chrono>
#include <cmath>
#include <numeric>
#include <string>

namespace pcc {

using Eigen::Index;
using Eigen::MatrixXd;

namespace {

constexpr std::array<std::pair<Method, std::string_view>, 8> kNames{{
    {Method::Pcc, "pcc"},
    {Method::Npcc, "npcc"},
    {Method::PccPlus, "pcc+"},
    {Method::NpccPlus, "npcc+"},
    {Method::PccStar, "pcc*"},
    {Method::NpccStar, "npcc*"},
    {Method::Rsc, "rsc"},
    {Method::Score, "score"},
}};

}  // namespace

std::string_view method_name(Method m) {
    for (auto [method, name] : kNames)
        if (method == m) return name;
    return "?";
}

Method parse_method(std::string_view name) {
    for (auto [method, n] : kNames)
        if (n == name) return method;
    throw InputError("unknown method '" + std::string(name) +
                     "' (expected pcc, npcc, pcc+, npcc+, pcc*, npcc*, rsc or score)");
}

const std::vector<Method>& all_methods() {
    static const std::vector<Method> methods = [] {
        std::vector<Method> v;
        for (auto [m, name] : kNames) v.push_back(m);
        return v;
    }();
    return methods;
}

bool uses_tau(Method m) {
    return m == Method::Npcc || m == Method::NpccPlus || m == Method::NpccStar || m == Method::Rsc;
}

void MethodOptions::validate(int k) const {
    if (tau && !(*tau >= 0.0)) throw InputError("tau must be nonnegative");
    if (!(threshold_t > 0.0 && threshold_t < 1.0)) throw InputError("threshold t must lie in (0, 1)");
    if (mk && *mk < k)
        throw InputError("M_k = " + std::to_string(*mk) + " must be at least K = " + std::to_string(k));
    kmeans.validate();
}

LabelVector Detection::restrict(const LabelVector& full) const {
    LabelVector out;
    out.values.reserve(kept.size());
    for (int i : kept) out.values.push_back(full.values.at(static_cast<std::size_t>(i)));
    return out;
}

EigenBasis adjacency_basis(const Graph& g, int m, const EigenOptions& eigen) {
    if (static_cast<Index>(g.size()) <= eigen.dense_max)
        return top_eigenpairs_symmetric(g.adjacency_dense(), m, eigen);
    return top_eigenpairs_symmetric(SymmetricOperator::sparse(g.adjacency_sparse()), m, eigen);
}

EigenBasis normalized_laplacian_basis(const Graph& g, double tau, int m, const EigenOptions& eigen) {
    return top_eigenpairs_colnorm(regularized_laplacian_operator(g, tau), m, eigen);
}

LabelVector cluster_leading(const EigenBasis& basis, int columns, int k, const KMeansConfig& cfg) {
    const Embedding emb = embed(basis.leading(columns));
    return kmeans(emb.X_star, k, cfg).labels;
}

int plus_columns(const EigenBasis& basis, int k, double threshold_t, double* gap) {
    if (basis.size() < k + 1) throw InputError("the + variants need K + 1 eigenpairs");
    const double lk = basis.values[k - 1], lk1 = basis.values[k];
    const double g = lk == 0.0 ? 0.0 : 1.0 - std::abs(lk1 / lk);
    if (gap) *gap = g;
    return g < threshold_t ? k + 1 : k;
}

MatrixXd score_ratios(const EigenBasis& basis, int k) {
    const Index n = basis.vectors.rows();
    const double clip = std::log(static_cast<double>(n));
    MatrixXd r(n, k - 1);
    for (Index i = 0; i < n; ++i) {
        const double lead = basis.vectors(i, 0);
        for (int c = 1; c < k; ++c) {
            double v = basis.vectors(i, c) / lead;
            if (std::isnan(v)) v = 0.0;
            r(i, c - 1) = std::clamp(v, -clip, clip);
        }
    }
    return r;
}

namespace {

std::vector<double> to_vector(const Eigen::VectorXd& v) { return {v.data(), v.data() + v.size()}; }

void run_method(const Graph& g, int k, Method method, const MethodOptions& opts, Detection& out) {
    const bool laplacian = uses_tau(method);
    double tau = 0.0;
    if (laplacian) {
        tau = opts.tau.value_or(default_tau(g));
        out.tau = tau;
    }
    auto cluster = [&](Eigen::MatrixXd points) {
        out.labels = kmeans(points, k, opts.kmeans).labels;
        out.embedding = std::move(points);
    };
    auto basis_for = [&](int m) {
        return laplacian ? normalized_laplacian_basis(g, tau, m, opts.eigen)
                         : adjacency_basis(g, m, opts.eigen);
    };

    switch (method) {
    case Method::Pcc:
    case Method::Npcc: {
        const EigenBasis basis = basis_for(k);
        out.columns = k;
        out.eigenvalues = to_vector(basis.values);
        cluster(embed(basis).X_star);
        break;
    }
    case Method::PccPlus:
    case Method::NpccPlus: {
        if (static_cast<int>(g.size()) < k + 2)
            throw InputError("the + variants need at least K + 2 nodes");
        const EigenBasis basis = basis_for(k + 1);
        double gap = 0.0;
        const int auto_columns = plus_columns(basis, k, opts.threshold_t, &gap);
        out.gap = gap;
        out.columns = opts.force_extra ? k + 1 : auto_columns;
        out.eigenvalues = to_vector(basis.values);
        cluster(embed(basis.leading(out.columns)).X_star);
        break;
    }
    case Method::PccStar:
    case Method::NpccStar: {
        const int mk = opts.mk.value_or(k);
        if (mk > static_cast<int>(g.size()))
            throw InputError("M_k = " + std::to_string(mk) + " exceeds node count " +
                             std::to_string(g.size()));
        const EigenBasis basis = basis_for(mk);
        out.columns = mk;
        out.eigenvalues = to_vector(basis.values);
        cluster(embed(basis).X_star);
        break;
    }
    case Method::Rsc: {
        const EigenBasis basis = top_eigenpairs_symmetric(regularized_laplacian_operator(g, tau), k, opts.eigen);
        out.columns = k;
        out.eigenvalues = to_vector(basis.values);
        cluster(embed_unweighted(basis).X_star);
        break;
    }
    case Method::Score: {
        const EigenBasis basis = adjacency_basis(g, k, opts.eigen);
        out.columns = k - 1;
        out.eigenvalues = to_vector(basis.values);
        cluster(score_ratios(basis, k));
        break;
    }
    }
}

}  // namespace

Detection detect_communities(const Graph& g, int k, Method method, const MethodOptions& opts) {
    const auto start = std::chrono::steady_clock::now();
    if (k < 2) throw InputError("community detection needs K >= 2");
    opts.validate(k);
    if (g.empty()) throw InputError("graph is empty");

    Detection out;
    out.method = method;
    if (is_connected(g)) {
        out.kept.resize(g.size());
        std::iota(out.kept.begin(), out.kept.end(), 0);
        if (static_cast<int>(g.size()) < k)
            throw InputError("K = " + std::to_string(k) + " exceeds node count " + std::to_string(g.size()));
        run_method(g, k, method, opts, out);
    } else {
        Component lcc = largest_connected_component(g);
        out.kept = std::move(lcc.original_index);
        out.dropped = g.size() - out.kept.size();
        if (static_cast<int>(lcc.graph.size()) < k)
            throw InputError("K = " + std::to_string(k) + " exceeds the " +
                             std::to_string(lcc.graph.size()) + "-node largest component");
        run_method(lcc.graph, k, method, opts, out);
    }
    out.elapsed_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return out;
}

Detection pcc(const Graph& g, int k, const MethodOptions& opts) {
    return detect_communities(g, k, Method::Pcc, opts);
}
Detection npcc(const Graph& g, int k, const MethodOptions& opts) {
    return detect_communities(g, k, Method::Npcc, opts);
}
Detection pcc_plus(const Graph& g, int k, const MethodOptions& opts) {
    return detect_communities(g, k, Method::PccPlus, opts);
}
Detection npcc_plus(const Graph& g, int k, const MethodOptions& opts) {
    return detect_communities(g, k, Method::NpccPlus, opts);
}
Detection pcc_star(const Graph& g, int k, const MethodOptions& opts) {
    return detect_communities(g, k, Method::PccStar, opts);
}
Detection npcc_star(const Graph& g, int k, const MethodOptions& opts) {
    return detect_communities(g, k, Method::NpccStar, opts);
}
Detection rsc_baseline(const Graph& g, int k, const MethodOptions& opts) {
    return detect_communities(g, k, Method::Rsc, opts);
}
Detection score_baseline(const Graph& g, int k, const MethodOptions& opts) {
    return detect_communities(g, k, Method::Score, opts);
}

}  // namespace pcc
