#include <benchmark/benchmark.h>

#include <Eigen/Core>

#include "mamkkc/adaptive_kernel.hpp"
#include "mamkkc/discretize.hpp"
#include "mamkkc/kernel_bank.hpp"
#include "mamkkc/manifold_graph.hpp"
#include "mamkkc/rng.hpp"
#include "mamkkc/solver.hpp"

namespace {

Eigen::MatrixXd random_features(Eigen::Index n, Eigen::Index d, std::uint64_t seed) {
  mamkkc::SplitMix64 rng(seed);
  Eigen::MatrixXd x(n, d);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < d; ++j) x(i, j) = rng.next_normal();
  return x;
}

void BM_BuildKernelBank(benchmark::State& state) {
  const auto x = random_features(state.range(0), 10, 1);
  for (auto _ : state) {
    auto bank = mamkkc::build_kernel_bank(x);
    benchmark::DoNotOptimize(bank);
  }
}
BENCHMARK(BM_BuildKernelBank)->Arg(100)->Arg(300);

void BM_KnnGraph(benchmark::State& state) {
  const auto x = random_features(state.range(0), 10, 2);
  const auto bank = mamkkc::build_kernel_bank(x);
  for (auto _ : state) {
    auto graph = mamkkc::knn_graph(bank[3], 5);
    benchmark::DoNotOptimize(graph);
  }
}
BENCHMARK(BM_KnnGraph)->Arg(100)->Arg(300);

void BM_Deform(benchmark::State& state) {
  const auto x = random_features(state.range(0), 10, 3);
  const auto bank = mamkkc::build_kernel_bank(x);
  const auto lap = mamkkc::laplacian(mamkkc::knn_graph(bank[3], 5));
  for (auto _ : state) {
    auto deformed = mamkkc::deform(bank[3], lap, 1.5);
    benchmark::DoNotOptimize(deformed);
  }
}
BENCHMARK(BM_Deform)->Arg(100)->Arg(300);

void BM_Fit(benchmark::State& state) {
  const auto x = random_features(state.range(0), 10, 4);
  const auto bank = mamkkc::build_kernel_bank(x);
  std::vector<mamkkc::AdaptiveKernel> deformed;
  for (const auto& kernel : bank) {
    const auto lap = mamkkc::laplacian(mamkkc::knn_graph(kernel, 5));
    deformed.push_back(mamkkc::deform(kernel, lap, 1.5));
  }
  for (auto _ : state) {
    auto solved = mamkkc::fit(deformed, 5);
    benchmark::DoNotOptimize(solved);
  }
}
BENCHMARK(BM_Fit)->Arg(100)->Arg(200);

void BM_KmeansRows(benchmark::State& state) {
  const auto x = random_features(state.range(0), 10, 5);
  const auto bank = mamkkc::build_kernel_bank(x);
  std::vector<mamkkc::AdaptiveKernel> deformed;
  for (const auto& kernel : bank) {
    const auto lap = mamkkc::laplacian(mamkkc::knn_graph(kernel, 5));
    deformed.push_back(mamkkc::deform(kernel, lap, 1.5));
  }
  const auto solved = mamkkc::fit(deformed, 5);
  for (auto _ : state) {
    auto labels = mamkkc::kmeans_rows(solved.partition, 5, {.restarts = 10, .seed = 6});
    benchmark::DoNotOptimize(labels);
  }
}
BENCHMARK(BM_KmeansRows)->Arg(200)->Arg(500);

}  // namespace

BENCHMARK_MAIN();
