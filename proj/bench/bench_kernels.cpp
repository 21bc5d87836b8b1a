// Serial reference kernels against their OpenMP counterparts.

#include <benchmark/benchmark.h>

#include <random>

#include "dilkit/kernels.hpp"
#include "dilkit/rkhm.hpp"

namespace {

using dilkit::ComplexMatrix;

ComplexMatrix random_matrix(std::size_t rows, std::size_t cols, unsigned seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> g;
  ComplexMatrix m(rows, cols);
  for (auto& z : m.data()) z = {g(rng), g(rng)};
  return m;
}

template <bool Parallel>
void BM_Gemm(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const ComplexMatrix a = random_matrix(n, n, 1);
  const ComplexMatrix b = random_matrix(n, n, 2);
  ComplexMatrix c(n, n);
  const dilkit::kernels::GemmShape shape{n, n, n, false};
  for (auto _ : state) {
    if constexpr (Parallel)
      dilkit::kernels::omp::gemm(shape, a.data(), b.data(), c.data());
    else
      dilkit::kernels::serial::gemm(shape, a.data(), b.data(), c.data());
    benchmark::DoNotOptimize(c.data().data());
  }
  state.SetItemsProcessed(state.iterations() * static_cast<long>(n * n * n));
}

template <bool Parallel>
void BM_AssembleBlocks(benchmark::State& state) {
  const auto grid = static_cast<std::size_t>(state.range(0));
  const std::size_t n = 3;
  std::vector<ComplexMatrix> blocks;
  for (std::size_t i = 0; i < grid * grid; ++i) blocks.push_back(random_matrix(n, n, 7 + i));
  const dilkit::kernels::BlockSource src = [&](std::size_t i, std::size_t j) -> const ComplexMatrix& {
    return blocks[i * grid + j];
  };
  ComplexMatrix out;
  for (auto _ : state) {
    if constexpr (Parallel)
      dilkit::kernels::omp::assemble_blocks(grid, n, src, out);
    else
      dilkit::kernels::serial::assemble_blocks(grid, n, src, out);
    benchmark::DoNotOptimize(out.data().data());
  }
}

BENCHMARK(BM_Gemm<false>)->Arg(32)->Arg(64)->Arg(128);
BENCHMARK(BM_Gemm<true>)->Arg(32)->Arg(64)->Arg(128);
BENCHMARK(BM_AssembleBlocks<false>)->Arg(16)->Arg(64);
BENCHMARK(BM_AssembleBlocks<true>)->Arg(16)->Arg(64);

}  // namespace
BENCHMARK_MAIN();
