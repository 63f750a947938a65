#pragma once

#include "pcc/graph.hpp"

#include <Eigen/Dense>
#include <Eigen/Sparse>

#include <cstdint>
#include <variant>
#include <vector>

namespace pcc {

/// Eigensolver settings.
struct EigenOptions {
    /// Matrices up to this order use a dense full decomposition; larger ones
    /// go through thick-restart Lanczos on the operator.
    Eigen::Index dense_max = 300;
    /// Relative Ritz residual required for Lanczos convergence.
    double tol = 1e-11;
    int max_restarts = 2000;
    std::uint64_t start_seed = 0x9e3779b97f4a7c15ULL;
};

/// Leading eigenpairs, ordered by descending |value|.
///
/// Column m of `vectors` is a unit-norm right eigenvector for values[m]; its
/// largest-magnitude entry (lowest index on ties) is positive.
struct EigenBasis {
    Eigen::VectorXd values;
    Eigen::MatrixXd vectors;

    Eigen::Index size() const { return values.size(); }
    /// First m pairs.
    EigenBasis leading(Eigen::Index m) const;
};

/// Spectral embedding: X = V * diag(values) and its row-normalised form.
struct Embedding {
    Eigen::MatrixXd X;
    Eigen::MatrixXd X_star;
    /// Rows whose norm fell below the zero threshold; set to e1 in X_star.
    std::vector<Eigen::Index> zero_rows;
};

/// diag(s) * B * diag(s) for a symmetric dense or sparse B.
///
/// Every matrix the algorithms diagonalise (A, L_tau, the symmetrised
/// column-normalised Laplacian, Omega and its Laplacians) has this form, so
/// the iterative solver only needs a sparse or dense product plus scaling.
class SymmetricOperator {
public:
    static SymmetricOperator dense(Eigen::MatrixXd base);
    static SymmetricOperator sparse(Eigen::SparseMatrix<double> base);

    Eigen::Index rows() const;
    const Eigen::VectorXd& scale() const { return scale_; }

    /// y = op * x.
    void apply(const Eigen::VectorXd& x, Eigen::VectorXd& y) const;
    Eigen::MatrixXd to_dense() const;
    /// 2-norm of each column.
    Eigen::VectorXd column_norms() const;
    /// diag(d) * op * diag(d).
    SymmetricOperator scaled(const Eigen::VectorXd& d) const;

private:
    std::variant<Eigen::MatrixXd, Eigen::SparseMatrix<double>> base_;
    Eigen::VectorXd scale_;
};

/// L_tau = D_tau^{-1/2} A D_tau^{-1/2} with D_tau = D + tau I.
/// Throws InputError for tau < 0, or a zero-degree node when tau == 0.
Eigen::MatrixXd regularized_laplacian(const Graph& g, double tau);
SymmetricOperator regularized_laplacian_operator(const Graph& g, double tau);

/// Average node degree. Throws InputError on an empty graph.
double default_tau(const Graph& g);

/// Scales every column to unit 2-norm; zero columns become e1.
Eigen::MatrixXd column_normalize(const Eigen::MatrixXd& y,
                                 std::vector<Eigen::Index>* zero_columns = nullptr);

/// The m eigenpairs of a symmetric matrix with largest |lambda|.
EigenBasis top_eigenpairs_symmetric(const Eigen::MatrixXd& m_sym, Eigen::Index m,
                                    const EigenOptions& opts = {});
EigenBasis top_eigenpairs_symmetric(const SymmetricOperator& op, Eigen::Index m,
                                    const EigenOptions& opts = {});

/// Leading eigenpairs of the column-normalised matrix N^Y = Y U_Y of a
/// symmetric Y, where U_Y = diag(1 / ||Y_i||).
///
/// Solved through the similar symmetric matrix U^{1/2} Y U^{1/2}; its
/// eigenvector v maps to the right eigenvector U^{-1/2} v of N^Y, which is
/// then rescaled to unit norm. Throws InputError if Y has a zero column.
EigenBasis top_eigenpairs_colnorm(const Eigen::MatrixXd& y, Eigen::Index m,
                                  const EigenOptions& opts = {});
EigenBasis top_eigenpairs_colnorm(const SymmetricOperator& y, Eigen::Index m,
                                  const EigenOptions& opts = {});

/// Row-normalises; rows with norm <= 1e-12 * max row norm become e1.
Eigen::MatrixXd row_normalize(const Eigen::MatrixXd& x,
                              std::vector<Eigen::Index>* zero_rows = nullptr);

/// X = V E and X* (eigenvalue-weighted, as in PCC/NPCC).
Embedding embed(const EigenBasis& basis);
/// X = V and X* (no eigenvalue weighting, as in RSC).
Embedding embed_unweighted(const EigenBasis& basis);

/// Indices sorting values by |value| descending, positive first on ties,
/// then by ascending index.
std::vector<Eigen::Index> magnitude_order(const Eigen::VectorXd& values);

/// Flips v so its largest-|entry| (first on ties) is positive.
void apply_sign_convention(Eigen::Ref<Eigen::VectorXd> v);

}  // namespace pcc
