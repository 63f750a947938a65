#pragma once

#include "pcc/clustering.hpp"
#include "pcc/graph.hpp"
#include "pcc/spectral.hpp"

#include <Eigen/Dense>

#include <cstdint>
#include <string>
#include <vector>

namespace pcc {

/// Degree-corrected stochastic block model: Pr(A_ij = 1) = theta_i theta_j P(g_i, g_j).
struct DcsbmParams {
    int n = 0;
    int k = 0;
    Eigen::MatrixXd p;
    Eigen::VectorXd theta;
    /// Community of each node, 0-based.
    LabelVector labels;

    /// Throws InputError when P is not a symmetric K x K matrix in [0, 1],
    /// theta is not strictly positive, labels are out of range or miss a
    /// community, or some theta_i theta_j P exceeds 1.
    void validate() const;

    /// Non-fatal model-assumption violations: singular or reducible P.
    std::vector<std::string> warnings() const;
};

/// Omega = Theta Z P Z' Theta (diagonal included).
Eigen::MatrixXd build_omega(const DcsbmParams& params);

/// Number of eigenvalues with |lambda| > 1e-8 |lambda_1|.
int numerical_rank(const Eigen::MatrixXd& symmetric);

/// Upper triangle drawn as independent Bernoulli(Omega_ij), mirrored.
Graph sample_adjacency(const DcsbmParams& params, std::uint64_t seed);

/// Population-level quantities for the regularised Laplacian.
struct PopulationModel {
    Eigen::MatrixXd omega;
    /// Expected degrees, diag of script D.
    Eigen::VectorXd expected_degree;
    double tau = 0.0;
    /// D_tau^{-1/2} Omega D_tau^{-1/2}, built from the definition.
    Eigen::MatrixXd laplacian;
    /// Theta_tau^{1/2} Z P~ Z' Theta_tau^{1/2}, the explicit product form.
    Eigen::MatrixXd laplacian_product;
    /// theta_i^tau = theta_i D_ii / (D_ii + tau).
    Eigen::VectorXd theta_tau;
    /// sqrt(theta_tau).
    Eigen::VectorXd theta_tilde;
    /// ||theta~^(k)|| / ||theta~||.
    Eigen::VectorXd d_tilde;
    /// D_P^{-1/2} P D_P^{-1/2}, D_P(k,k) = sum_j (P Z' Theta)_kj.
    Eigen::MatrixXd p_tilde;
    Eigen::VectorXd d_p;

    /// Largest entrywise gap between the two Laplacian constructions.
    double construction_gap() const;
};

/// Throws InputError when some node has zero expected degree.
PopulationModel population_model(const DcsbmParams& params, double tau);

/// n x K matrix with columns theta~^(k) / ||theta~^(k)||.
Eigen::MatrixXd gamma_tilde(const DcsbmParams& params, const PopulationModel& pop);

/// Outcome of running an algorithm on population matrices.
struct IdealReport {
    ClusterResult cluster;
    /// Largest distance between X* rows of the same community.
    double max_within = 0.0;
    /// Smallest distance between X* rows of different communities.
    double min_across = 0.0;
    /// Largest gap between the population eigenvalues and those predicted by
    /// the K x K reduction (||theta||^2 eig(D P D) for PCC, eig(F~) for NPCC).
    double eigenvalue_gap = 0.0;
    /// NPCC only: max |Gamma~ F~ - N Gamma~|.
    double intertwining_gap = 0.0;
    bool passed = false;
    std::vector<std::string> failures;
};

/// PCC on Omega instead of A. Expects zero mismatches and exactly K distinct
/// X* rows (within-class distance < 1e-8, across-class > 1e-4).
IdealReport verify_ideal_pcc(const DcsbmParams& params, const KMeansConfig& kmeans = {});

/// NPCC on the column-normalised population Laplacian.
IdealReport verify_ideal_npcc(const DcsbmParams& params, double tau,
                              const KMeansConfig& kmeans = {});

/// D-bar P D-bar with D-bar(k,k) = ||theta^(k)|| / ||theta||.
Eigen::MatrixXd dbar_p_dbar(const DcsbmParams& params);

/// Minimum gap between adjacent eigenvalues of a symmetric matrix
/// (infinity for 1 x 1).
double eigsp(const Eigen::MatrixXd& b);

/// err_n / n from the Hamming-error bound for PCC, "up to constants" via C.
double error_bound(const DcsbmParams& params, double c = 1.0);

struct AssumptionReport {
    /// log(n) theta_max ||theta||_1 / ||theta||^4, should be small.
    double sparsity = 0.0;
    /// eigsp(D-bar P D-bar), should stay bounded away from 0.
    double eigen_spacing = 0.0;
    /// max_{i,j} ||theta^(i)|| / ||theta^(j)||.
    double balance = 0.0;
    /// log(n) theta_max^2 / theta_min compared with ||theta||_3^3.
    double heterogeneity_lhs = 0.0;
    double heterogeneity_rhs = 0.0;
};

AssumptionReport check_assumptions(const DcsbmParams& params);

/// Params from a JSON document:
/// {"n", "K", "P": [[..]] or row-major flat list,
///  "theta": [..] | {"kind": "constant"|"by_community"|"power", ...},
///  "labels": [..1-based..] | {"kind": "equal_probability"|"proportions", ...}}.
/// `seed` drives random label generation.
DcsbmParams params_from_json(const std::string& text, std::uint64_t seed = 1);
/// Explicit form (theta and labels as lists, labels 1-based).
std::string params_to_json(const DcsbmParams& params);

/// Labels drawn uniformly over K communities, redrawn until all are used.
LabelVector equal_probability_labels(int n, int k, std::uint64_t seed);
/// Contiguous blocks of the given sizes.
LabelVector block_labels(const std::vector<int>& sizes);

/// Random well-posed model: K in {2, 3, 4}, n in [max(30, 10K), max_n],
/// unit diagonal P with off-diagonal entries in [0.05, 0.6] (redrawn until the
/// smallest singular value is at least 0.05), theta in [0.2, 1], labels equally likely.
DcsbmParams random_params(std::uint64_t seed, int max_n = 200);

/// The three-community example: n = 90, P diag 0.6 off-diagonal 0.3,
/// theta_i = 0.3 + 0.7 (i/n)^2, labels equally likely.
DcsbmParams figure_one_params(std::uint64_t seed = 7);

}  // namespace pcc
