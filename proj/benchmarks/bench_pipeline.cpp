#include "pcc/clustering.hpp"
#include "pcc/dcsbm.hpp"
#include "pcc/methods.hpp"
#include "pcc/random.hpp"
#include "pcc/spectral.hpp"

#include <benchmark/benchmark.h>

#include <map>
#include <string>

namespace {

pcc::DcsbmParams experiment3_model(int n) {
    pcc::DcsbmParams p;
    p.n = n;
    p.k = 4;
    p.p = Eigen::MatrixXd::Constant(4, 4, 0.5);
    p.p.diagonal().setOnes();
    p.labels = pcc::equal_probability_labels(n, 4, 1);
    p.theta.resize(n);
    for (int i = 0; i < n; ++i) p.theta[i] = 0.2 * (p.labels.values[i] + 1);
    return p;
}

const pcc::Graph& graph(int n) {
    static std::map<int, pcc::Graph> cache;
    auto it = cache.find(n);
    if (it == cache.end()) it = cache.emplace(n, pcc::sample_adjacency(experiment3_model(n), 2)).first;
    return it->second;
}

void BM_DenseEigen(benchmark::State& state) {
    const Eigen::MatrixXd a = graph(static_cast<int>(state.range(0))).adjacency_dense();
    pcc::EigenOptions opts;
    opts.dense_max = a.rows();
    for (auto _ : state) benchmark::DoNotOptimize(pcc::top_eigenpairs_symmetric(a, 4, opts));
}
BENCHMARK(BM_DenseEigen)->Arg(200)->Arg(500)->Arg(1000)->Unit(benchmark::kMillisecond);

void BM_LanczosEigen(benchmark::State& state) {
    const auto op = pcc::SymmetricOperator::sparse(graph(static_cast<int>(state.range(0))).adjacency_sparse());
    pcc::EigenOptions opts;
    opts.dense_max = 0;
    for (auto _ : state) benchmark::DoNotOptimize(pcc::top_eigenpairs_symmetric(op, 4, opts));
}
BENCHMARK(BM_LanczosEigen)->Arg(200)->Arg(500)->Arg(1000)->Arg(4000)->Unit(benchmark::kMillisecond);

void BM_KMeans(benchmark::State& state) {
    const int n = static_cast<int>(state.range(0));
    pcc::Rng rng(3);
    Eigen::MatrixXd x(n, 4);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < 4; ++j) x(i, j) = rng.uniform() + (i % 4 == j ? 2.0 : 0.0);
    for (auto _ : state) benchmark::DoNotOptimize(pcc::kmeans(x, 4));
}
BENCHMARK(BM_KMeans)->Arg(500)->Arg(4000)->Unit(benchmark::kMillisecond);

void BM_Method(benchmark::State& state) {
    const pcc::Graph& g = graph(static_cast<int>(state.range(1)));
    const auto method = static_cast<pcc::Method>(state.range(0));
    state.SetLabel(std::string(pcc::method_name(method)));
    for (auto _ : state) benchmark::DoNotOptimize(pcc::detect_communities(g, 4, method));
}
BENCHMARK(BM_Method)
    ->ArgsProduct({{static_cast<long>(pcc::Method::Pcc), static_cast<long>(pcc::Method::Npcc),
                    static_cast<long>(pcc::Method::Rsc), static_cast<long>(pcc::Method::Score)},
                   {500, 2000}})
    ->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
