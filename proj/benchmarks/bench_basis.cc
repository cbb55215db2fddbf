#include "benchmark/benchmark.h"
#include "opres/basis.hpp"
#include "opres/rng.hpp"

namespace {

void BM_Encode(benchmark::State& state) {
  const int r = static_cast<int>(state.range(0));
  const int dim = static_cast<int>(state.range(1));
  const opres::BasisSpec spec{opres::BasisKind::trigonometric, dim, r};
  const auto grid = opres::make_grid(dim, 2 * r + 12);
  opres::Rng rng(1);
  std::vector<double> coeffs(spec.encode_dim());
  for (double& c : coeffs) c = rng.symmetric_unit();
  const auto u = opres::decode(spec, coeffs, grid);
  for (auto _ : state) {
    auto encoded = opres::encode(spec, u);
    benchmark::DoNotOptimize(encoded.data());
  }
}
BENCHMARK(BM_Encode)->Args({8, 1})->Args({16, 1})->Args({4, 2});

void BM_Decode(benchmark::State& state) {
  const int r = static_cast<int>(state.range(0));
  const opres::BasisSpec spec{opres::BasisKind::legendre, 1, r};
  const auto grid = opres::make_grid(1, 2 * r + 12);
  opres::Rng rng(2);
  std::vector<double> coeffs(spec.encode_dim());
  for (double& c : coeffs) c = rng.symmetric_unit();
  for (auto _ : state) {
    auto f = opres::decode(spec, coeffs, grid);
    benchmark::DoNotOptimize(f.values.data());
  }
}
BENCHMARK(BM_Decode)->Arg(8)->Arg(32);

}  // namespace
