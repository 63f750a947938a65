#include "pcc/clustering.hpp"

#include "pcc/errors.hpp"
#include "pcc/random.hpp"

#include <algorithm>
#include <limits>
#include <numeric>
#include <string>

namespace pcc {

using Eigen::Index;
using Eigen::MatrixXd;

void KMeansConfig::validate() const {
    if (restarts < 1) throw InputError("k-means restarts must be >= 1");
    if (max_iters < 1) throw InputError("k-means max_iters must be >= 1");
    if (!(tol > 0.0)) throw InputError("k-means tol must be > 0");
}

namespace {

double sq_dist(const MatrixXd& a, Index i, const MatrixXd& b, Index j) {
    return (a.row(i) - b.row(j)).squaredNorm();
}

MatrixXd seed_plus_plus(const MatrixXd& x, int k, Rng& rng) {
    const Index n = x.rows();
    MatrixXd centers(k, x.cols());
    centers.row(0) = x.row(static_cast<Index>(rng.below(static_cast<std::uint64_t>(n))));
    std::vector<double> d2(static_cast<std::size_t>(n));
    for (Index i = 0; i < n; ++i) d2[i] = sq_dist(x, i, centers, 0);
    for (int c = 1; c < k; ++c) {
        const double total = std::accumulate(d2.begin(), d2.end(), 0.0);
        Index pick = 0;
        if (total > 0.0) {
            const double target = rng.uniform() * total;
            double run = 0.0;
            pick = n - 1;
            for (Index i = 0; i < n; ++i) {
                run += d2[i];
                if (run > target && d2[i] > 0.0) {
                    pick = i;
                    break;
                }
            }
        } else {
            // every point coincides with a chosen centre
            pick = static_cast<Index>(rng.below(static_cast<std::uint64_t>(n)));
        }
        centers.row(c) = x.row(pick);
        for (Index i = 0; i < n; ++i) d2[i] = std::min(d2[i], sq_dist(x, i, centers, c));
    }
    return centers;
}

struct Run {
    std::vector<int> assign;
    MatrixXd centers;
    double wcss = 0.0;
};

Run lloyd(const MatrixXd& x, MatrixXd centers, const KMeansConfig& cfg) {
    const Index n = x.rows();
    const int k = static_cast<int>(centers.rows());
    Run run;
    run.assign.assign(static_cast<std::size_t>(n), -1);
    std::vector<double> dist(static_cast<std::size_t>(n));

    auto assign_points = [&] {
        for (Index i = 0; i < n; ++i) {
            int best = 0;
            double bd = sq_dist(x, i, centers, 0);
            for (int c = 1; c < k; ++c) {
                const double d = sq_dist(x, i, centers, c);
                if (d < bd) {
                    bd = d;
                    best = c;
                }
            }
            run.assign[i] = best;
            dist[i] = bd;
        }
    };

    for (int iter = 0; iter < cfg.max_iters; ++iter) {
        assign_points();
        MatrixXd next = MatrixXd::Zero(k, x.cols());
        std::vector<Index> count(static_cast<std::size_t>(k), 0);
        for (Index i = 0; i < n; ++i) {
            next.row(run.assign[i]) += x.row(i);
            ++count[run.assign[i]];
        }
        for (int c = 0; c < k; ++c) {
            if (count[c] > 0) {
                next.row(c) /= static_cast<double>(count[c]);
                continue;
            }
            // empty cluster: take the point farthest from its centre
            Index far = 0;
            for (Index i = 1; i < n; ++i)
                if (dist[i] > dist[far]) far = i;
            next.row(c) = x.row(far);
            dist[far] = 0.0;
        }
        const double shift = (next - centers).rowwise().norm().maxCoeff();
        const double scale = std::max(1e-300, next.rowwise().norm().maxCoeff());
        centers = std::move(next);
        if (shift <= cfg.tol * scale) break;
    }
    assign_points();
    // coincident points can still leave a cluster empty; move the farthest
    // point of a multi-point cluster into it
    std::vector<Index> count(static_cast<std::size_t>(k), 0);
    for (int a : run.assign) ++count[a];
    for (int c = 0; c < k; ++c) {
        if (count[c] > 0) continue;
        Index far = -1;
        for (Index i = 0; i < n; ++i)
            if (count[run.assign[i]] > 1 && (far < 0 || dist[i] > dist[far])) far = i;
        --count[run.assign[far]];
        run.assign[far] = c;
        ++count[c];
        centers.row(c) = x.row(far);
        dist[far] = 0.0;
    }
    run.centers = std::move(centers);
    return run;
}

}  // namespace

double wcss(const MatrixXd& points, const LabelVector& labels) {
    if (static_cast<Index>(labels.size()) != points.rows())
        throw InputError("wcss: label count does not match point count");
    const int k = labels.num_classes();
    MatrixXd sums = MatrixXd::Zero(k, points.cols());
    std::vector<Index> count(static_cast<std::size_t>(k), 0);
    for (Index i = 0; i < points.rows(); ++i) {
        sums.row(labels.values[i]) += points.row(i);
        ++count[labels.values[i]];
    }
    for (int c = 0; c < k; ++c)
        if (count[c] > 0) sums.row(c) /= static_cast<double>(count[c]);
    double total = 0.0;
    for (Index i = 0; i < points.rows(); ++i) total += sq_dist(points, i, sums, labels.values[i]);
    return total;
}

KMeansResult kmeans(const MatrixXd& points, int k, const KMeansConfig& cfg) {
    cfg.validate();
    const Index n = points.rows();
    if (k < 1) throw InputError("k-means needs k >= 1");
    if (k > n)
        throw InputError("k-means: k = " + std::to_string(k) + " exceeds " + std::to_string(n) +
                         " points");

    KMeansResult best;
    best.wcss = std::numeric_limits<double>::infinity();
    for (int r = 0; r < cfg.restarts; ++r) {
        Rng rng(cfg.seed + static_cast<std::uint64_t>(r));
        Run run = lloyd(points, seed_plus_plus(points, k, rng), cfg);
        LabelVector labels{std::move(run.assign)};
        const double score = wcss(points, labels);
        if (score < best.wcss) {
            best.labels = std::move(labels);
            best.centers = std::move(run.centers);
            best.wcss = score;
            best.restart = r;
        }
    }
    return best;
}

Eigen::MatrixXi confusion_matrix(const LabelVector& est, const LabelVector& truth, int k) {
    if (est.size() != truth.size())
        throw InputError("label vectors differ in length: " + std::to_string(est.size()) +
                         " vs " + std::to_string(truth.size()));
    Eigen::MatrixXi c = Eigen::MatrixXi::Zero(k, k);
    for (std::size_t i = 0; i < est.size(); ++i) {
        const int e = est.values[i], t = truth.values[i];
        if (e < 0 || e >= k || t < 0 || t >= k)
            throw InputError("label out of range [1, " + std::to_string(k) + "] at node " +
                             std::to_string(i + 1));
        ++c(e, t);
    }
    return c;
}

std::vector<int> best_permutation_bruteforce(const Eigen::MatrixXi& confusion) {
    const int k = static_cast<int>(confusion.rows());
    std::vector<int> perm(static_cast<std::size_t>(k));
    std::iota(perm.begin(), perm.end(), 0);
    std::vector<int> best = perm;
    long long best_hits = -1;
    do {
        long long hits = 0;
        for (int e = 0; e < k; ++e) hits += confusion(e, perm[e]);
        if (hits > best_hits) {
            best_hits = hits;
            best = perm;
        }
    } while (std::next_permutation(perm.begin(), perm.end()));
    return best;
}

std::vector<int> best_permutation_assignment(const Eigen::MatrixXi& confusion) {
    // Hungarian algorithm (potentials form) minimising -confusion
    const int k = static_cast<int>(confusion.rows());
    const long long inf = std::numeric_limits<long long>::max() / 4;
    std::vector<long long> u(k + 1, 0), v(k + 1, 0);
    std::vector<int> p(k + 1, 0), way(k + 1, 0);
    for (int i = 1; i <= k; ++i) {
        p[0] = i;
        int j0 = 0;
        std::vector<long long> minv(k + 1, inf);
        std::vector<char> used(k + 1, 0);
        do {
            used[j0] = 1;
            const int i0 = p[j0];
            long long delta = inf;
            int j1 = 0;
            for (int j = 1; j <= k; ++j) {
                if (used[j]) continue;
                const long long cur = -static_cast<long long>(confusion(i0 - 1, j - 1)) - u[i0] - v[j];
                if (cur < minv[j]) {
                    minv[j] = cur;
                    way[j] = j0;
                }
                if (minv[j] < delta) {
                    delta = minv[j];
                    j1 = j;
                }
            }
            for (int j = 0; j <= k; ++j) {
                if (used[j]) {
                    u[p[j]] += delta;
                    v[j] -= delta;
                } else {
                    minv[j] -= delta;
                }
            }
            j0 = j1;
        } while (p[j0] != 0);
        do {
            const int j1 = way[j0];
            p[j0] = p[j1];
            j0 = j1;
        } while (j0 != 0);
    }
    std::vector<int> perm(static_cast<std::size_t>(k));
    for (int j = 1; j <= k; ++j) perm[p[j] - 1] = j - 1;
    return perm;
}

ClusterResult align_and_score(const LabelVector& est, const LabelVector& truth, int k) {
    if (k < 1) throw InputError("align_and_score needs k >= 1");
    const auto conf = confusion_matrix(est, truth, k);
    ClusterResult r;
    r.labels = est;
    r.permutation = k <= 8 ? best_permutation_bruteforce(conf) : best_permutation_assignment(conf);
    std::size_t hits = 0;
    for (int e = 0; e < k; ++e) hits += static_cast<std::size_t>(conf(e, r.permutation[e]));
    r.mismatches = est.size() - hits;
    r.error_rate = est.values.empty() ? 0.0 : static_cast<double>(r.mismatches) / static_cast<double>(est.size());
    return r;
}

}  // namespace pcc
