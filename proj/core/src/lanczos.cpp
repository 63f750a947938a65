#include "lanczos.hpp"

#include "pcc/errors.hpp"
#include "pcc/random.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace pcc::detail {

namespace {

using Eigen::Index;
using Eigen::MatrixXd;
using Eigen::VectorXd;

// Two passes of classical Gram-Schmidt against the first `cols` basis vectors.
// Returns the accumulated projection coefficients.
VectorXd orthogonalize(const MatrixXd& basis, Index cols, VectorXd& w) {
    const auto q = basis.leftCols(cols);
    VectorXd h = q.transpose() * w;
    w.noalias() -= q * h;
    VectorXd h2 = q.transpose() * w;
    w.noalias() -= q * h2;
    return h + h2;
}

VectorXd random_unit(Index n, Rng& rng) {
    VectorXd v(n);
    for (Index i = 0; i < n; ++i) v[i] = rng.uniform() - 0.5;
    return v / v.norm();
}

}  // namespace

EigenBasis lanczos_top_magnitude(const SymmetricOperator& op, Index m, const EigenOptions& opts) {
    const Index n = op.rows();
    const Index ncv = std::min(n - 1, std::max<Index>(2 * m + 10, 30));
    if (m < 1 || m >= ncv)
        throw NumericalError("lanczos: cannot extract " + std::to_string(m) +
                             " pairs from an operator of order " + std::to_string(n));

    Rng rng(opts.start_seed);
    MatrixXd basis(n, ncv + 1);
    MatrixXd t = MatrixXd::Zero(ncv, ncv);
    basis.col(0) = random_unit(n, rng);

    Index kept = 0;
    VectorXd w(n);
    double scale_estimate = 0.0;

    for (int restart = 0; restart <= opts.max_restarts; ++restart) {
        double beta = 0.0;
        for (Index j = kept; j < ncv; ++j) {
            op.apply(basis.col(j), w);
            VectorXd h = orthogonalize(basis, j + 1, w);
            t.col(j).head(j + 1) = h;
            t.row(j).head(j + 1) = h.transpose();
            beta = w.norm();
            scale_estimate = std::max(scale_estimate, h.cwiseAbs().maxCoeff());
            if (beta <= 1e-14 * std::max(1.0, scale_estimate)) {
                // invariant subspace reached; continue from a fresh direction
                VectorXd r = random_unit(n, rng);
                orthogonalize(basis, j + 1, r);
                basis.col(j + 1) = r / r.norm();
                beta = 0.0;
            } else {
                basis.col(j + 1) = w / beta;
            }
        }

        Eigen::SelfAdjointEigenSolver<MatrixXd> es(t);
        if (es.info() != Eigen::Success)
            throw NumericalError("lanczos: projected eigenproblem failed");
        const VectorXd& theta = es.eigenvalues();
        const MatrixXd& y = es.eigenvectors();
        const auto order = magnitude_order(theta);

        const double ref = std::max(1.0, std::abs(theta[order[0]]));
        bool converged = true;
        for (Index i = 0; i < m && converged; ++i)
            converged = std::abs(beta * y(ncv - 1, order[i])) <= opts.tol * ref;

        if (converged) {
            EigenBasis out;
            out.values.resize(m);
            out.vectors.resize(n, m);
            for (Index i = 0; i < m; ++i) {
                out.values[i] = theta[order[i]];
                VectorXd v = basis.leftCols(ncv) * y.col(order[i]);
                v /= v.norm();
                apply_sign_convention(v);
                out.vectors.col(i) = v;
            }
            return out;
        }

        // keep the best Ritz vectors, residual direction goes next
        kept = m + (ncv - m) / 2;
        MatrixXd ritz(ncv, kept);
        for (Index i = 0; i < kept; ++i) ritz.col(i) = y.col(order[i]);
        MatrixXd compressed = basis.leftCols(ncv) * ritz;
        basis.col(kept) = basis.col(ncv);
        basis.leftCols(kept) = compressed;
        t.setZero();
        for (Index i = 0; i < kept; ++i) t(i, i) = theta[order[i]];
    }
    throw NumericalError("lanczos: no convergence for order-" + std::to_string(n) +
                         " operator at relative tolerance " + std::to_string(opts.tol) +
                         " after " + std::to_string(opts.max_restarts) + " restarts");
}

}  // namespace pcc::detail
