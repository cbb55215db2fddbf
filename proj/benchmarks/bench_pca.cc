#include "benchmark/benchmark.h"
#include "opres/basis.hpp"
#include "opres/pca.hpp"
#include "opres/rng.hpp"

namespace {

opres::SnapshotSet make_snapshots(int n, int span_order) {
  const opres::BasisSpec spec{opres::BasisKind::trigonometric, 1, span_order};
  const auto grid = opres::make_grid(1, 2 * span_order + 12);
  opres::Rng rng(3);
  opres::SnapshotSet snaps;
  for (int i = 0; i < n; ++i) {
    std::vector<double> c(spec.encode_dim());
    for (double& v : c) v = rng.symmetric_unit();
    snaps.functions.push_back(opres::decode(spec, c, grid));
  }
  return snaps;
}

void BM_JacobiEigen(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  opres::Rng rng(4);
  std::vector<double> a(n * n);
  for (int i = 0; i < n; ++i)
    for (int j = i; j < n; ++j) {
      const double v = rng.symmetric_unit();
      a[i * n + j] = v;
      a[j * n + i] = v;
    }
  for (auto _ : state) {
    auto eig = opres::symmetric_eigen(a, n);
    benchmark::DoNotOptimize(eig.eigenvalues.data());
  }
}
BENCHMARK(BM_JacobiEigen)->Arg(16)->Arg(64);

void BM_FitPca(benchmark::State& state) {
  const auto snaps = make_snapshots(static_cast<int>(state.range(0)), 10);
  for (auto _ : state) {
    auto model = opres::fit_pca(snaps, 5);
    benchmark::DoNotOptimize(model.eigenvalues.data());
  }
}
BENCHMARK(BM_FitPca)->Arg(16)->Arg(64);

}  // namespace
