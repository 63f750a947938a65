#include "pcc/datasets.hpp"
#include "pcc/errors.hpp"
#include "pcc/random.hpp"
#include "pcc/spectral.hpp"

#include <doctest.h>

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <complex>

using namespace pcc;
using Eigen::Index;
using Eigen::MatrixXd;
using Eigen::VectorXd;

namespace {

MatrixXd random_symmetric(Index n, std::uint64_t seed) {
    Rng rng(seed);
    MatrixXd m(n, n);
    for (Index i = 0; i < n; ++i)
        for (Index j = 0; j <= i; ++j) m(i, j) = m(j, i) = 2.0 * rng.uniform() - 1.0;
    return m;
}

Graph random_graph(int n, double p, std::uint64_t seed) {
    Rng rng(seed);
    std::vector<std::pair<int, int>> e;
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j)
            if (rng.uniform() < p) e.emplace_back(i, j);
    return Graph::from_edges(static_cast<std::size_t>(n), e);
}

// All eigenvalues sorted by |lambda| descending, positive first on ties.
VectorXd oracle_values(const MatrixXd& m) {
    Eigen::SelfAdjointEigenSolver<MatrixXd> es(m);
    std::vector<double> v(es.eigenvalues().data(), es.eigenvalues().data() + m.rows());
    std::stable_sort(v.begin(), v.end(), [](double a, double b) {
        return std::abs(a) != std::abs(b) ? std::abs(a) > std::abs(b) : a > b;
    });
    return Eigen::Map<VectorXd>(v.data(), static_cast<Index>(v.size()));
}

double residual(const MatrixXd& m, const EigenBasis& b) {
    double worst = 0.0;
    for (Index c = 0; c < b.size(); ++c)
        worst = std::max(worst, (m * b.vectors.col(c) - b.values[c] * b.vectors.col(c)).norm());
    return worst;
}

}  // namespace

TEST_CASE("diagonal matrix picks the largest magnitudes") {
    MatrixXd d = VectorXd((VectorXd(3) << 5, -7, 1).finished()).asDiagonal();
    const EigenBasis b = top_eigenpairs_symmetric(d, 2);
    CHECK(b.values[0] == doctest::Approx(-7));
    CHECK(b.values[1] == doctest::Approx(5));
    CHECK(b.vectors.col(0).isApprox(VectorXd::Unit(3, 1)));
    CHECK(b.vectors.col(1).isApprox(VectorXd::Unit(3, 0)));
}

TEST_CASE("dense and Lanczos paths match the full decomposition") {
    const MatrixXd m = random_symmetric(200, 7);
    const VectorXd oracle = oracle_values(m);
    EigenOptions lanczos;
    lanczos.dense_max = 0;
    const EigenBasis dense = top_eigenpairs_symmetric(m, 5);
    const EigenBasis iter = top_eigenpairs_symmetric(m, 5, lanczos);
    for (Index i = 0; i < 5; ++i) {
        CHECK(std::abs(dense.values[i] - oracle[i]) < 1e-8);
        CHECK(std::abs(iter.values[i] - oracle[i]) < 1e-8);
    }
    CHECK(residual(m, dense) < 1e-8);
    CHECK(residual(m, iter) < 1e-8);
    // same sign convention, so the vectors agree outright
    CHECK((dense.vectors - iter.vectors).cwiseAbs().maxCoeff() < 1e-6);
    CHECK((iter.vectors.transpose() * iter.vectors - MatrixXd::Identity(5, 5)).cwiseAbs().maxCoeff() < 1e-10);
}

TEST_CASE("Lanczos on sparse operators over many sizes") {
    EigenOptions lanczos;
    lanczos.dense_max = 0;
    for (int trial = 0; trial < 10; ++trial) {
        const int n = 40 + 26 * trial;
        const Graph g = random_graph(n, 0.08, 100 + static_cast<std::uint64_t>(trial));
        const MatrixXd a = g.adjacency_dense();
        const Index m = 1 + trial % 6;
        const EigenBasis b = top_eigenpairs_symmetric(SymmetricOperator::sparse(g.adjacency_sparse()), m, lanczos);
        const VectorXd oracle = oracle_values(a);
        for (Index i = 0; i < m; ++i) CHECK(std::abs(b.values[i] - oracle[i]) < 1e-8);
        CHECK(residual(a, b) < 1e-7);
    }
}

TEST_CASE("degenerate spectra converge") {
    // complete bipartite K_{5,5} has eigenvalues 5, -5 and eight zeros
    std::vector<std::pair<int, int>> e;
    for (int i = 0; i < 5; ++i)
        for (int j = 5; j < 10; ++j) e.emplace_back(i, j);
    EigenOptions lanczos;
    lanczos.dense_max = 0;
    const Graph g = Graph::from_edges(10, e);
    const EigenBasis b = top_eigenpairs_symmetric(SymmetricOperator::sparse(g.adjacency_sparse()), 2, lanczos);
    CHECK(b.values[0] == doctest::Approx(5));
    CHECK(b.values[1] == doctest::Approx(-5));
}

TEST_CASE("column-normalised spectrum matches a general eigensolve") {
    for (std::uint64_t seed = 1; seed <= 10; ++seed) {
        MatrixXd y = random_symmetric(30, seed).cwiseAbs();
        const VectorXd norms = y.colwise().norm();
        const MatrixXd n_y = y * norms.cwiseInverse().asDiagonal();
        Eigen::EigenSolver<MatrixXd> es(n_y);
        CHECK(es.eigenvalues().imag().cwiseAbs().maxCoeff() < 1e-10);
        const VectorXd oracle = oracle_values(es.eigenvalues().real().asDiagonal());

        const EigenBasis b = top_eigenpairs_colnorm(y, 30);
        for (Index i = 0; i < 30; ++i) CHECK(std::abs(b.values[i] - oracle[i]) < 1e-8);
        CHECK(residual(n_y, b) < 1e-8);
        for (Index c = 0; c < 30; ++c) CHECK(b.vectors.col(c).norm() == doctest::Approx(1.0));

        EigenOptions lanczos;
        lanczos.dense_max = 0;
        const EigenBasis it = top_eigenpairs_colnorm(SymmetricOperator::dense(y), 4, lanczos);
        for (Index i = 0; i < 4; ++i) CHECK(std::abs(it.values[i] - oracle[i]) < 1e-8);
    }
}

TEST_CASE("column normalisation preserves inertia") {
    for (std::uint64_t seed = 20; seed < 30; ++seed) {
        const MatrixXd base = random_symmetric(12, seed);
        // rank-deficient: zero eigenvalues appear
        const MatrixXd y = base.leftCols(5) * base.leftCols(5).transpose() - base.col(6) * base.col(6).transpose();
        auto counts = [](const VectorXd& v, double scale) {
            int pos = 0, neg = 0, zero = 0;
            for (double x : v) (std::abs(x) <= 1e-9 * scale ? zero : x > 0 ? pos : neg)++;
            return std::array<int, 3>{pos, neg, zero};
        };
        const VectorXd ev = Eigen::SelfAdjointEigenSolver<MatrixXd>(y).eigenvalues();
        const EigenBasis b = top_eigenpairs_colnorm(y, 12);
        CHECK(counts(ev, ev.cwiseAbs().maxCoeff()) == counts(b.values, b.values.cwiseAbs().maxCoeff()));
        CHECK(counts(ev, ev.cwiseAbs().maxCoeff()) == std::array<int, 3>{5, 1, 6});
    }
}

TEST_CASE("zero column is rejected by the eigen path and mapped to e1 by column_normalize") {
    MatrixXd y = MatrixXd::Zero(3, 3);
    y(0, 1) = y(1, 0) = 1.0;
    CHECK_THROWS_AS(top_eigenpairs_colnorm(y, 1), InputError);
    std::vector<Index> zero;
    const MatrixXd n = column_normalize(y, &zero);
    CHECK(zero == std::vector<Index>{2});
    CHECK(n.col(2) == VectorXd::Unit(3, 0));
    CHECK(n.col(0).norm() == doctest::Approx(1.0));
}

TEST_CASE("regularised Laplacian follows its definition") {
    const Graph g = random_graph(60, 0.1, 5);
    const double tau = 2.5;
    const MatrixXd a = g.adjacency_dense();
    MatrixXd expect(60, 60);
    for (Index i = 0; i < 60; ++i)
        for (Index j = 0; j < 60; ++j) {
            const double di = a.row(i).sum() + tau, dj = a.row(j).sum() + tau;
            expect(i, j) = a(i, j) / std::sqrt(di * dj);
        }
    CHECK((regularized_laplacian(g, tau) - expect).cwiseAbs().maxCoeff() < 1e-15);
    CHECK((regularized_laplacian_operator(g, tau).to_dense() - expect).cwiseAbs().maxCoeff() < 1e-15);
    VectorXd x = VectorXd::LinSpaced(60, -1, 1), y;
    regularized_laplacian_operator(g, tau).apply(x, y);
    CHECK((y - expect * x).norm() < 1e-13);
}

TEST_CASE("Laplacian argument checks") {
    const std::vector<std::pair<int, int>> e{{0, 1}};
    const Graph g = Graph::from_edges(3, e);
    CHECK_THROWS_AS(regularized_laplacian(g, -1.0), InputError);
    CHECK_THROWS_AS(regularized_laplacian(g, 0.0), InputError);
    CHECK_NOTHROW(regularized_laplacian(g, 0.5));
    CHECK_THROWS_AS(default_tau(Graph{}), InputError);
}

TEST_CASE("default tau on karate is the average degree") {
    CHECK(default_tau(datasets::karate()) == doctest::Approx(156.0 / 34.0));
    CHECK(default_tau(datasets::karate()) == doctest::Approx(4.5882).epsilon(1e-4));
}

TEST_CASE("row normalisation and embeddings") {
    MatrixXd x(3, 2);
    x << 3, 4, 0, 0, -1, 0;
    std::vector<Index> zero;
    const MatrixXd r = row_normalize(x, &zero);
    CHECK(zero == std::vector<Index>{1});
    CHECK(r.row(0).isApprox(Eigen::RowVector2d(0.6, 0.8)));
    CHECK(r.row(1) == Eigen::RowVector2d(1, 0));
    EigenBasis b;
    b.values = Eigen::Vector2d(2.0, -0.5);
    b.vectors = x;
    const Embedding e = embed(b);
    CHECK(e.X.col(1).isApprox(-0.5 * x.col(1)));
    CHECK(embed_unweighted(b).X == x);
}

TEST_CASE("magnitude order and sign convention") {
    const VectorXd v = (VectorXd(4) << 1, -2, 2, -1).finished();
    CHECK(magnitude_order(v) == std::vector<Index>{2, 1, 0, 3});
    VectorXd w = (VectorXd(3) << 0.1, -0.9, 0.9).finished();
    apply_sign_convention(w);
    CHECK(w[1] == doctest::Approx(0.9));
}

TEST_CASE("operator scaling composes") {
    const Graph g = random_graph(30, 0.2, 9);
    const VectorXd s = VectorXd::LinSpaced(30, 0.5, 1.5);
    const SymmetricOperator op = SymmetricOperator::sparse(g.adjacency_sparse()).scaled(s).scaled(s);
    const MatrixXd expect = s.cwiseProduct(s).asDiagonal() * g.adjacency_dense() * s.cwiseProduct(s).asDiagonal();
    CHECK((op.to_dense() - expect).cwiseAbs().maxCoeff() < 1e-14);
    CHECK((op.column_norms() - expect.colwise().norm().transpose()).cwiseAbs().maxCoeff() < 1e-13);
}
