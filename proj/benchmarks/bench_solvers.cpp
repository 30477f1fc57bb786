#include <random>
#include <vector>

#include <benchmark/benchmark.h>

#include "scarlab/eigensolve.hpp"
#include "scarlab/hamiltonian_1d.hpp"
#include "scarlab/hamiltonian_3d.hpp"

using namespace scarlab;

namespace {

std::vector<double> random_vector(std::size_t n) {
  std::mt19937_64 rng(7);
  std::normal_distribution<double> normal;
  std::vector<double> x(n);
  for (auto& v : x) v = normal(rng);
  return x;
}

void BM_Dense1D(benchmark::State& state) {
  ModelParams p;
  p.heavy_cutoff = static_cast<int>(state.range(0));
  const auto sector = enumerate_basis_1d(p);
  const MatrixElementRule1D rule(p);
  for (auto _ : state) benchmark::DoNotOptimize(solve_dense(sector, rule));
  state.counters["dim"] = static_cast<double>(sector.dim());
}
BENCHMARK(BM_Dense1D)->Arg(7)->Arg(13)->Unit(benchmark::kMillisecond);

void BM_Build3D(benchmark::State& state) {
  ModelParams p;
  p.cutoff_sq = static_cast<int>(state.range(0));
  const auto sector = enumerate_sector_3d(p.cutoff_sq, {0, 0, 0});
  const MatrixElementRule3D rule(p);
  for (auto _ : state) benchmark::DoNotOptimize(build_hamiltonian_3d(sector, rule));
  state.counters["dim"] = static_cast<double>(sector.dim());
}
BENCHMARK(BM_Build3D)->Arg(2)->Arg(4)->Unit(benchmark::kMillisecond);

void BM_Apply3D(benchmark::State& state) {
  ModelParams p;
  p.cutoff_sq = static_cast<int>(state.range(0));
  const auto sector = enumerate_sector_3d(p.cutoff_sq, {0, 0, 0});
  const auto h = build_hamiltonian_3d(sector, MatrixElementRule3D(p));
  const auto x = random_vector(h.dim());
  std::vector<double> y(h.dim());
  for (auto _ : state) {
    h.apply(x, y);
    benchmark::DoNotOptimize(y.data());
  }
  state.counters["nnz"] = static_cast<double>(h.nonzeros());
  state.SetItemsProcessed(state.iterations() * static_cast<long>(h.nonzeros()));
}
BENCHMARK(BM_Apply3D)->Arg(2)->Arg(5)->Arg(10);

void BM_Lanczos3D(benchmark::State& state) {
  ModelParams p;
  p.cutoff_sq = static_cast<int>(state.range(0));
  const auto sector = enumerate_sector_3d(p.cutoff_sq, {0, 0, 0});
  const auto h = build_hamiltonian_3d(sector, MatrixElementRule3D(p));
  const auto [sym, anti] = symmetrize_sector(sector);
  const auto hs = build_symmetrized_hamiltonian_3d(sector, sym, h);
  IterativeOptions opts;
  opts.count = 6;
  for (auto _ : state) benchmark::DoNotOptimize(solve_iterative(hs, "", opts));
  state.counters["dim"] = static_cast<double>(hs.dim());
}
BENCHMARK(BM_Lanczos3D)->Arg(4)->Arg(6)->Unit(benchmark::kMillisecond);

}  // namespace
BENCHMARK_MAIN();
