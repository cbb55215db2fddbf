#include "benchmark/benchmark.h"
#include "opres/fnn.hpp"
#include "opres/rng.hpp"

namespace {

void BM_ForwardBackward(benchmark::State& state) {
  const int width = static_cast<int>(state.range(0));
  const opres::ArchClass arch = opres::UnconstrainedArch{3, width, 2.0};
  const opres::FnnParams net = opres::init_params(arch, 10, 10, 7);
  opres::FnnParams grads = opres::zeros_like(net);
  opres::Rng rng(8);
  std::vector<double> x(10);
  for (double& v : x) v = rng.symmetric_unit();
  opres::FnnWorkspace ws;
  std::vector<double> out;
  std::vector<double> upstream(10, 0.25);
  for (auto _ : state) {
    opres::fnn_forward(net, x, ws, out);
    opres::fnn_backward(net, ws, x, upstream, grads);
    benchmark::DoNotOptimize(grads.layers.front().weights.data());
  }
}
BENCHMARK(BM_ForwardBackward)->Arg(16)->Arg(64)->Arg(256);

void BM_MultiIndexForward(benchmark::State& state) {
  const opres::MultiIndexFnn net =
      opres::init_multi_index(16, 1, 4, 2, static_cast<int>(state.range(0)), 2.0, 9);
  opres::Rng rng(10);
  std::vector<double> x(16);
  for (double& v : x) v = rng.symmetric_unit();
  for (auto _ : state) {
    auto out = opres::multi_index_forward(net, x);
    benchmark::DoNotOptimize(out.data());
  }
}
BENCHMARK(BM_MultiIndexForward)->Arg(8)->Arg(32);

}  // namespace
