#include "benchmark/benchmark.h"
#include "opres/rng.hpp"
#include "opres/train.hpp"

namespace {

opres::EncodedDataset linear_data(int n, int dim) {
  opres::Rng rng(11);
  opres::EncodedDataset data;
  data.d_x = data.d_y = dim;
  for (int i = 0; i < n; ++i) {
    std::vector<double> x(dim), y(dim);
    for (double& v : x) v = rng.symmetric_unit();
    for (int j = 0; j < dim; ++j) y[j] = 0.5 * x[j];
    data.inputs.push_back(std::move(x));
    data.targets.push_back(std::move(y));
  }
  return data;
}

void BM_TrainEpochs(benchmark::State& state) {
  const auto data = linear_data(static_cast<int>(state.range(0)), 10);
  opres::TrainConfig cfg;
  cfg.epochs = 10;
  cfg.batch_size = 32;
  cfg.seed = 3;
  const opres::ArchClass arch = opres::UnconstrainedArch{2, 48, 2.0};
  for (auto _ : state) {
    auto result = opres::stage2(data, arch, cfg);
    benchmark::DoNotOptimize(result.trace.best_risk);
  }
}
BENCHMARK(BM_TrainEpochs)->Arg(256)->Arg(1024)->Unit(benchmark::kMillisecond);

}  // namespace
