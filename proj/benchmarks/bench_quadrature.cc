#include <cmath>

#include "benchmark/benchmark.h"
#include "opres/quadrature.hpp"

namespace {

void BM_GaussLegendreRule(benchmark::State& state) {
  const int m = static_cast<int>(state.range(0));
  for (auto _ : state) {
    auto rule = opres::gauss_legendre_rule(m);
    benchmark::DoNotOptimize(rule.first.data());
  }
}
BENCHMARK(BM_GaussLegendreRule)->Arg(16)->Arg(64)->Arg(256);

void BM_InnerProduct1D(benchmark::State& state) {
  const auto grid = opres::make_grid(1, static_cast<int>(state.range(0)));
  const auto f = opres::grid_sample(
      grid, [](const std::vector<double>& x) { return std::sin(3.0 * x[0]); });
  const auto g = opres::grid_sample(
      grid, [](const std::vector<double>& x) { return std::cos(2.0 * x[0]); });
  for (auto _ : state) benchmark::DoNotOptimize(opres::inner_product(f, g));
}
BENCHMARK(BM_InnerProduct1D)->Arg(32)->Arg(256);

void BM_InnerProduct2D(benchmark::State& state) {
  const auto grid = opres::make_grid(2, static_cast<int>(state.range(0)));
  const auto f = opres::grid_sample(
      grid, [](const std::vector<double>& x) { return x[0] * x[1]; });
  for (auto _ : state) benchmark::DoNotOptimize(opres::inner_product(f, f));
}
BENCHMARK(BM_InnerProduct2D)->Arg(16)->Arg(48);

}  // namespace
