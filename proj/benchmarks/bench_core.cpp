#include <benchmark/benchmark.h>

#include "hdmrge/basis.hpp"
#include "hdmrge/eigensolve.hpp"
#include "hdmrge/embedding.hpp"
#include "hdmrge/graph.hpp"
#include "hdmrge/metrics.hpp"

#include <random>

namespace {

using hdmrge::Labels;
using hdmrge::Matrix;

struct Blobs {
  Matrix x;
  Labels labels;
};

Blobs make_blobs(int m, int n, int classes, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> g(0.0, 1.0);
  Blobs b;
  b.x.resize(m, n);
  for (int i = 0; i < m; ++i) {
    const int c = i % classes;
    b.labels.push_back(c + 1);
    for (int j = 0; j < n; ++j) b.x(i, j) = g(rng) + 3.0 * ((c + j) % 3);
  }
  return b;
}

void BM_expand(benchmark::State& state) {
  const Blobs b = make_blobs(static_cast<int>(state.range(0)), 50, 4, 1);
  const hdmrge::BasisSpec spec = hdmrge::fit_basis(b.x, 4, 0.05);
  for (auto _ : state) benchmark::DoNotOptimize(hdmrge::expand(spec, b.x));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_expand)->Arg(256)->Arg(1024);

void BM_build_graph(benchmark::State& state) {
  const Blobs b = make_blobs(static_cast<int>(state.range(0)), 50, 8, 2);
  for (auto _ : state) benchmark::DoNotOptimize(hdmrge::build_supervised_affinity(b.x, b.labels, 5));
}
BENCHMARK(BM_build_graph)->Arg(256)->Arg(1024);

void BM_solve_gep(benchmark::State& state) {
  const auto s = static_cast<Eigen::Index>(state.range(0));
  std::mt19937_64 rng(3);
  std::normal_distribution<double> g(0.0, 1.0);
  Matrix r = Matrix::NullaryExpr(s, s, [&] { return g(rng); });
  Matrix q = Matrix::NullaryExpr(s, s, [&] { return g(rng); });
  const Matrix a = r * r.transpose();
  const Matrix bm = q * q.transpose() + Matrix::Identity(s, s);
  for (auto _ : state) benchmark::DoNotOptimize(hdmrge::solve_gep(a, bm, 10, 1.0));
}
BENCHMARK(BM_solve_gep)->Arg(100)->Arg(400)->Unit(benchmark::kMillisecond);

void BM_fit_hdmr(benchmark::State& state) {
  const Blobs b = make_blobs(static_cast<int>(state.range(0)), 30, 6, 4);
  hdmrge::HdmrParams params;
  params.dims = 10;
  for (auto _ : state) benchmark::DoNotOptimize(hdmrge::fit_hdmr(b.x, b.labels, params));
}
BENCHMARK(BM_fit_hdmr)->Arg(300)->Arg(1000)->Unit(benchmark::kMillisecond);

void BM_nn_prefix(benchmark::State& state) {
  const Blobs train = make_blobs(1000, 20, 10, 5);
  const Blobs test = make_blobs(static_cast<int>(state.range(0)), 20, 10, 6);
  for (auto _ : state) {
    benchmark::DoNotOptimize(
        hdmrge::nn_accuracy_by_prefix(train.x, train.labels, test.x, test.labels, 20));
  }
}
BENCHMARK(BM_nn_prefix)->Arg(1000)->Unit(benchmark::kMillisecond);

void BM_silhouette(benchmark::State& state) {
  const Blobs b = make_blobs(static_cast<int>(state.range(0)), 15, 10, 7);
  for (auto _ : state) benchmark::DoNotOptimize(hdmrge::silhouette(b.x, b.labels));
}
BENCHMARK(BM_silhouette)->Arg(1000)->Unit(benchmark::kMillisecond);

void BM_kmeans(benchmark::State& state) {
  const Blobs b = make_blobs(static_cast<int>(state.range(0)), 15, 10, 8);
  for (auto _ : state) benchmark::DoNotOptimize(hdmrge::kmeans(b.x, 10));
}
BENCHMARK(BM_kmeans)->Arg(1000)->Unit(benchmark::kMillisecond);

}  // namespace
BENCHMARK_MAIN();
