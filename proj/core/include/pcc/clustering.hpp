#pragma once

#include "pcc/graph.hpp"

#include <Eigen/Dense>

#include <cstdint>
#include <vector>

namespace pcc {

struct KMeansConfig {
    int restarts = 50;
    int max_iters = 100;
    /// Stop when every centre moves less than tol * (largest centre norm).
    double tol = 1e-6;
    std::uint64_t seed = 1;

    /// Throws InputError when a field is out of range.
    void validate() const;
};

struct KMeansResult {
    LabelVector labels;
    Eigen::MatrixXd centers;
    double wcss = 0.0;
    /// Restart index that produced the result.
    int restart = 0;
};

/// Lloyd's algorithm on the rows of `points` with k-means++ seeding.
///
/// Each restart r uses seed cfg.seed + r; the restart with the lowest
/// within-cluster sum of squares wins (lowest index on ties). Clusters that
/// empty during iteration are reseeded with the point farthest from its
/// centre.
KMeansResult kmeans(const Eigen::MatrixXd& points, int k, const KMeansConfig& cfg = {});

/// Within-cluster sum of squared distances to cluster means.
double wcss(const Eigen::MatrixXd& points, const LabelVector& labels);

struct ClusterResult {
    LabelVector labels;
    /// permutation[estimated label] = matched true label.
    std::vector<int> permutation;
    std::size_t mismatches = 0;
    double error_rate = 0.0;
    double elapsed_seconds = 0.0;
};

/// K x K table: confusion(e, t) = #{i : est_i = e, truth_i = t}.
Eigen::MatrixXi confusion_matrix(const LabelVector& est, const LabelVector& truth, int k);

/// Best label matching by enumerating all K! permutations.
std::vector<int> best_permutation_bruteforce(const Eigen::MatrixXi& confusion);
/// Best label matching via the Hungarian algorithm, O(K^3).
std::vector<int> best_permutation_assignment(const Eigen::MatrixXi& confusion);

/// Permutation-minimised mismatch count and error rate.
///
/// Labels must lie in [0, k). Exact enumeration for k <= 8, assignment
/// algorithm above that.
ClusterResult align_and_score(const LabelVector& est, const LabelVector& truth, int k);

}  // namespace pcc
