#pragma once

#include "pcc/clustering.hpp"
#include "pcc/graph.hpp"
#include "pcc/spectral.hpp"

#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace pcc {

enum class Method { Pcc, Npcc, PccPlus, NpccPlus, PccStar, NpccStar, Rsc, Score };

/// CLI names: pcc, npcc, pcc+, npcc+, pcc*, npcc*, rsc, score.
std::string_view method_name(Method m);
/// Throws InputError for an unknown name.
Method parse_method(std::string_view name);
const std::vector<Method>& all_methods();

/// True for methods built on the regularised Laplacian (tau matters).
bool uses_tau(Method m);

struct MethodOptions {
    /// Regulariser; average degree when unset.
    std::optional<double> tau;
    /// Gap threshold t for the "+" variants, in (0, 1).
    double threshold_t = 0.1;
    /// Embedding width for the "*" variants; K when unset.
    std::optional<int> mk;
    /// "+" variants: always use K + 1 columns regardless of the gap.
    bool force_extra = false;
    KMeansConfig kmeans;
    EigenOptions eigen;

    void validate(int k) const;
};

/// Output of one community-detection run.
///
/// Methods run on the largest connected component; `labels[i]` belongs to
/// input node `kept[i]`.
struct Detection {
    Method method = Method::Pcc;
    LabelVector labels;
    std::vector<int> kept;
    std::size_t dropped = 0;
    /// Embedding columns actually clustered (M).
    int columns = 0;
    /// Regulariser used, for Laplacian-based methods.
    std::optional<double> tau;
    /// Leading eigenvalues that fed the embedding (K+1 for "+" variants).
    std::vector<double> eigenvalues;
    /// "+" variants: 1 - |lambda_{K+1} / lambda_K|.
    std::optional<double> gap;
    double elapsed_seconds = 0.0;
    /// Points handed to k-means (X* rows, or SCORE ratios).
    Eigen::MatrixXd embedding;

    /// Restricts a label vector over the input graph to the kept nodes.
    LabelVector restrict(const LabelVector& full) const;
};

Detection detect_communities(const Graph& g, int k, Method method, const MethodOptions& opts = {});

Detection pcc(const Graph& g, int k, const MethodOptions& opts = {});
Detection npcc(const Graph& g, int k, const MethodOptions& opts = {});
Detection pcc_plus(const Graph& g, int k, const MethodOptions& opts = {});
Detection npcc_plus(const Graph& g, int k, const MethodOptions& opts = {});
Detection pcc_star(const Graph& g, int k, const MethodOptions& opts = {});
Detection npcc_star(const Graph& g, int k, const MethodOptions& opts = {});
Detection rsc_baseline(const Graph& g, int k, const MethodOptions& opts = {});
Detection score_baseline(const Graph& g, int k, const MethodOptions& opts = {});

/// Leading m eigenpairs of A.
EigenBasis adjacency_basis(const Graph& g, int m, const EigenOptions& eigen = {});
/// Leading m right eigenpairs of N^{L_tau}.
EigenBasis normalized_laplacian_basis(const Graph& g, double tau, int m,
                                      const EigenOptions& eigen = {});

/// k-means on the row-normalised embedding built from the first `columns`
/// pairs of `basis`.
LabelVector cluster_leading(const EigenBasis& basis, int columns, int k, const KMeansConfig& cfg);

/// M = K + 1 when 1 - |lambda_{K+1}/lambda_K| < t, else K.
int plus_columns(const EigenBasis& basis, int k, double threshold_t, double* gap = nullptr);

/// SCORE coordinates: eta_k(i) / eta_1(i), k = 2..K, clipped to [-log n, log n].
Eigen::MatrixXd score_ratios(const EigenBasis& basis, int k);

}  // namespace pcc
