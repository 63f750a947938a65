#include "pcc/spectral.hpp"

#include "lanczos.hpp"
#include "pcc/errors.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

namespace pcc {

using Eigen::Index;
using Eigen::MatrixXd;
using Eigen::VectorXd;

EigenBasis EigenBasis::leading(Index m) const {
    if (m < 0 || m > size())
        throw InputError("requested " + std::to_string(m) + " of " + std::to_string(size()) +
                         " eigenpairs");
    return {values.head(m), vectors.leftCols(m)};
}

SymmetricOperator SymmetricOperator::dense(MatrixXd base) {
    SymmetricOperator op;
    op.scale_ = VectorXd::Ones(base.rows());
    op.base_ = std::move(base);
    return op;
}

SymmetricOperator SymmetricOperator::sparse(Eigen::SparseMatrix<double> base) {
    SymmetricOperator op;
    op.scale_ = VectorXd::Ones(base.rows());
    op.base_ = std::move(base);
    return op;
}

Index SymmetricOperator::rows() const { return scale_.size(); }

void SymmetricOperator::apply(const VectorXd& x, VectorXd& y) const {
    const VectorXd sx = scale_.cwiseProduct(x);
    std::visit([&](const auto& b) { y.noalias() = b * sx; }, base_);
    y.array() *= scale_.array();
}

MatrixXd SymmetricOperator::to_dense() const {
    MatrixXd b = std::visit([](const auto& m) -> MatrixXd { return MatrixXd(m); }, base_);
    return scale_.asDiagonal() * b * scale_.asDiagonal();
}

VectorXd SymmetricOperator::column_norms() const {
    const VectorXd s2 = scale_.array().square();
    VectorXd out(rows());
    if (const auto* d = std::get_if<MatrixXd>(&base_)) {
        out = (d->array().square().matrix().transpose() * s2).cwiseSqrt();
    } else {
        const auto& sp = std::get<Eigen::SparseMatrix<double>>(base_);
        out.setZero();
        for (Index j = 0; j < sp.outerSize(); ++j)
            for (Eigen::SparseMatrix<double>::InnerIterator it(sp, j); it; ++it)
                out[it.col()] += it.value() * it.value() * s2[it.row()];
        out = out.cwiseSqrt();
    }
    return out.cwiseProduct(scale_.cwiseAbs());
}

SymmetricOperator SymmetricOperator::scaled(const VectorXd& d) const {
    SymmetricOperator op = *this;
    op.scale_ = scale_.cwiseProduct(d);
    return op;
}

namespace {

VectorXd laplacian_scale(const Graph& g, double tau) {
    if (!(tau >= 0.0)) throw InputError("tau must be nonnegative");
    VectorXd s(static_cast<Index>(g.size()));
    for (std::size_t i = 0; i < g.size(); ++i) {
        const double d = g.degree(i) + tau;
        if (d <= 0.0)
            throw InputError("node '" + g.node_id(i) + "' has zero degree and tau = 0");
        s[static_cast<Index>(i)] = 1.0 / std::sqrt(d);
    }
    return s;
}

EigenBasis dense_top(const MatrixXd& m_sym, Index m) {
    Eigen::SelfAdjointEigenSolver<MatrixXd> es(m_sym);
    if (es.info() != Eigen::Success)
        throw NumericalError("dense symmetric eigensolver failed on order-" +
                             std::to_string(m_sym.rows()) + " matrix");
    const auto order = magnitude_order(es.eigenvalues());
    EigenBasis out;
    out.values.resize(m);
    out.vectors.resize(m_sym.rows(), m);
    for (Index i = 0; i < m; ++i) {
        out.values[i] = es.eigenvalues()[order[i]];
        out.vectors.col(i) = es.eigenvectors().col(order[i]);
        apply_sign_convention(out.vectors.col(i));
    }
    return out;
}

void check_count(Index n, Index m) {
    if (m < 1 || m > n)
        throw InputError("eigenpair count " + std::to_string(m) + " outside [1, " +
                         std::to_string(n) + "]");
}

}  // namespace

MatrixXd regularized_laplacian(const Graph& g, double tau) {
    return regularized_laplacian_operator(g, tau).to_dense();
}

SymmetricOperator regularized_laplacian_operator(const Graph& g, double tau) {
    const VectorXd s = laplacian_scale(g, tau);
    return SymmetricOperator::sparse(g.adjacency_sparse()).scaled(s);
}

double default_tau(const Graph& g) {
    if (g.empty()) throw InputError("default tau is undefined for an empty graph");
    return 2.0 * static_cast<double>(g.edge_count()) / static_cast<double>(g.size());
}

MatrixXd column_normalize(const MatrixXd& y, std::vector<Index>* zero_columns) {
    MatrixXd out = y;
    if (zero_columns) zero_columns->clear();
    for (Index j = 0; j < y.cols(); ++j) {
        const double norm = y.col(j).norm();
        if (norm > 0.0) {
            out.col(j) /= norm;
        } else {
            out.col(j).setZero();
            if (out.rows() > 0) out(0, j) = 1.0;
            if (zero_columns) zero_columns->push_back(j);
        }
    }
    return out;
}

EigenBasis top_eigenpairs_symmetric(const MatrixXd& m_sym, Index m, const EigenOptions& opts) {
    check_count(m_sym.rows(), m);
    if (m_sym.rows() <= opts.dense_max || m + 1 >= m_sym.rows() - 1) return dense_top(m_sym, m);
    return detail::lanczos_top_magnitude(SymmetricOperator::dense(m_sym), m, opts);
}

EigenBasis top_eigenpairs_symmetric(const SymmetricOperator& op, Index m, const EigenOptions& opts) {
    check_count(op.rows(), m);
    if (op.rows() <= opts.dense_max || m + 1 >= op.rows() - 1) return dense_top(op.to_dense(), m);
    return detail::lanczos_top_magnitude(op, m, opts);
}

EigenBasis top_eigenpairs_colnorm(const SymmetricOperator& y, Index m, const EigenOptions& opts) {
    const VectorXd norms = y.column_norms();
    for (Index j = 0; j < norms.size(); ++j)
        if (!(norms[j] > 0.0))
            throw InputError("column " + std::to_string(j) +
                             " is zero; the column-normalised matrix is not similar to a "
                             "symmetric one");
    // S = U^{1/2} Y U^{1/2}, U = diag(1/norms)
    const VectorXd half = norms.cwiseSqrt().cwiseInverse();
    EigenBasis basis = top_eigenpairs_symmetric(y.scaled(half), m, opts);
    const VectorXd back = norms.cwiseSqrt();
    for (Index i = 0; i < basis.size(); ++i) {
        auto v = basis.vectors.col(i);
        v = v.cwiseProduct(back);
        v /= v.norm();
        apply_sign_convention(v);
    }
    return basis;
}

EigenBasis top_eigenpairs_colnorm(const MatrixXd& y, Index m, const EigenOptions& opts) {
    return top_eigenpairs_colnorm(SymmetricOperator::dense(y), m, opts);
}

MatrixXd row_normalize(const MatrixXd& x, std::vector<Index>* zero_rows) {
    MatrixXd out = x;
    if (zero_rows) zero_rows->clear();
    if (x.rows() == 0) return out;
    const VectorXd norms = x.rowwise().norm();
    const double threshold = 1e-12 * norms.maxCoeff();
    for (Index i = 0; i < x.rows(); ++i) {
        if (norms[i] > threshold) {
            out.row(i) /= norms[i];
        } else {
            out.row(i).setZero();
            if (out.cols() > 0) out(i, 0) = 1.0;
            if (zero_rows) zero_rows->push_back(i);
        }
    }
    return out;
}

Embedding embed(const EigenBasis& basis) {
    Embedding e;
    e.X = basis.vectors * basis.values.asDiagonal();
    e.X_star = row_normalize(e.X, &e.zero_rows);
    return e;
}

Embedding embed_unweighted(const EigenBasis& basis) {
    Embedding e;
    e.X = basis.vectors;
    e.X_star = row_normalize(e.X, &e.zero_rows);
    return e;
}

std::vector<Index> magnitude_order(const VectorXd& values) {
    std::vector<Index> idx(static_cast<std::size_t>(values.size()));
    std::iota(idx.begin(), idx.end(), Index{0});
    std::stable_sort(idx.begin(), idx.end(), [&](Index a, Index b) {
        const double ma = std::abs(values[a]), mb = std::abs(values[b]);
        if (ma != mb) return ma > mb;
        return values[a] > values[b];
    });
    return idx;
}

void apply_sign_convention(Eigen::Ref<VectorXd> v) {
    if (v.size() == 0) return;
    Index best = 0;
    for (Index i = 1; i < v.size(); ++i)
        if (std::abs(v[i]) > std::abs(v[best])) best = i;
    if (v[best] < 0.0) v = -v;
}

}  // namespace pcc
