#include "opres/train.hpp"

#include <cmath>
#include <numeric>

#include "opres/errors.hpp"
#include "opres/rng.hpp"

namespace opres {

std::pair<Dataset, Dataset> split(const Dataset& dataset, double fraction) {
  const std::size_t count = dataset.size();
  if (count < 2) throw ConfigError("split: need at least 2 pairs");
  if (!(fraction > 0.0 && fraction < 1.0))
    throw ConfigError("split: fraction must lie in (0,1)");
  const auto take =
      static_cast<std::size_t>(std::ceil(fraction * static_cast<double>(count)));
  if (take == 0 || take >= count)
    throw ConfigError("split: fraction " + std::to_string(fraction) +
                      " leaves an empty part for " + std::to_string(count) +
                      " pairs");
  Dataset s1, s2;
  s1.grid = s2.grid = dataset.grid;
  s1.meta = s2.meta = dataset.meta;
  s1.inputs.assign(dataset.inputs.begin(), dataset.inputs.begin() + take);
  s1.outputs.assign(dataset.outputs.begin(), dataset.outputs.begin() + take);
  s2.inputs.assign(dataset.inputs.begin() + take, dataset.inputs.end());
  s2.outputs.assign(dataset.outputs.begin() + take, dataset.outputs.end());
  return {std::move(s1), std::move(s2)};
}

int EncoderPair::d_x() const {
  if (const auto* basis = std::get_if<BasisEncoderPair>(&impl))
    return basis->spec_x.encode_dim();
  return std::get<PcaEncoderPair>(impl).model_x.encode_dim;
}

int EncoderPair::d_y() const {
  if (const auto* basis = std::get_if<BasisEncoderPair>(&impl))
    return basis->spec_y.encode_dim();
  return std::get<PcaEncoderPair>(impl).model_y.encode_dim;
}

std::vector<double> EncoderPair::encode_x(const GridFunction& u) const {
  if (const auto* basis = std::get_if<BasisEncoderPair>(&impl))
    return encode(basis->spec_x, u);
  return pca_encode(std::get<PcaEncoderPair>(impl).model_x, u);
}

std::vector<double> EncoderPair::encode_y(const GridFunction& v) const {
  if (const auto* basis = std::get_if<BasisEncoderPair>(&impl))
    return encode(basis->spec_y, v);
  return pca_encode(std::get<PcaEncoderPair>(impl).model_y, v);
}

GridFunction EncoderPair::decode_x(std::span<const double> a,
                                   const GridPtr& grid) const {
  if (const auto* basis = std::get_if<BasisEncoderPair>(&impl))
    return decode(basis->spec_x, a, grid);
  return pca_decode(std::get<PcaEncoderPair>(impl).model_x, a, grid);
}

GridFunction EncoderPair::decode_y(std::span<const double> a,
                                   const GridPtr& grid) const {
  if (const auto* basis = std::get_if<BasisEncoderPair>(&impl))
    return decode(basis->spec_y, a, grid);
  return pca_decode(std::get<PcaEncoderPair>(impl).model_y, a, grid);
}

GridFunction EncoderPair::project_x(const GridFunction& u) const {
  return decode_x(encode_x(u), u.grid);
}

GridFunction EncoderPair::project_y(const GridFunction& v) const {
  return decode_y(encode_y(v), v.grid);
}

EncoderPair stage1(const Dataset& s1, const Stage1Choice& choice) {
  if (const auto* basis = std::get_if<BasisStage1Choice>(&choice)) {
    // Deterministic encoders skip Stage 1 entirely.
    return EncoderPair{BasisEncoderPair{basis->spec_x, basis->spec_y}};
  }
  const auto& pca = std::get<PcaStage1Choice>(choice);
  const int need = std::max(pca.d_x, pca.d_y);
  if (static_cast<int>(s1.size()) < need)
    throw ConfigError("stage1: PCA needs |S1| >= max(d_x, d_y) = " +
                      std::to_string(need) + ", got " +
                      std::to_string(s1.size()));
  SnapshotSet snaps_x{s1.inputs};
  SnapshotSet snaps_y{s1.outputs};  // fitted on noisy v_i
  return EncoderPair{PcaEncoderPair{fit_pca(snaps_x, pca.d_x),
                                    fit_pca(snaps_y, pca.d_y)}};
}

EncodedDataset encode_dataset(const Dataset& s2, const EncoderPair& encoders) {
  EncodedDataset out;
  out.d_x = encoders.d_x();
  out.d_y = encoders.d_y();
  out.inputs.reserve(s2.size());
  out.targets.reserve(s2.size());
  for (std::size_t i = 0; i < s2.size(); ++i) {
    out.inputs.push_back(encoders.encode_x(s2.inputs[i]));
    out.targets.push_back(encoders.encode_y(s2.outputs[i]));
  }
  return out;
}

namespace {

template <typename Net>
double risk_impl(const Net& net, const EncodedDataset& data) {
  if (data.size() == 0) throw ConfigError("empirical_risk: empty dataset");
  double acc = 0.0;
  for (std::size_t i = 0; i < data.size(); ++i) {
    std::vector<double> out;
    if constexpr (std::is_same_v<Net, FnnParams>) {
      out = fnn_forward(net, data.inputs[i]);
    } else {
      out = multi_index_forward(net, data.inputs[i]);
    }
    const auto& target = data.targets[i];
    if (out.size() != target.size())
      throw DimensionError("empirical_risk: output/target size mismatch");
    double sq = 0.0;
    for (std::size_t j = 0; j < out.size(); ++j) {
      const double diff = out[j] - target[j];
      sq += diff * diff;
    }
    acc += sq;
  }
  return acc / static_cast<double>(data.size());
}

}  // namespace

double empirical_risk(const FnnParams& net, const EncodedDataset& data) {
  return risk_impl(net, data);
}
double empirical_risk(const MultiIndexFnn& net, const EncodedDataset& data) {
  return risk_impl(net, data);
}

template <typename Net>
void sgd_step(Net& net, Net& grads, SgdState<Net>& state, const SgdConfig& cfg,
              double lr_scale) {
  const double lr = cfg.lr * lr_scale;
  std::vector<std::span<double>> net_blocks, grad_blocks, vel_blocks;
  for_each_param_block(net, [&](std::span<double> b) { net_blocks.push_back(b); });
  for_each_param_block(grads, [&](std::span<double> b) { grad_blocks.push_back(b); });
  for_each_param_block(state.velocity,
                       [&](std::span<double> b) { vel_blocks.push_back(b); });
  for (std::size_t b = 0; b < net_blocks.size(); ++b) {
    for (std::size_t i = 0; i < net_blocks[b].size(); ++i) {
      double& v = vel_blocks[b][i];
      v = cfg.momentum * v + grad_blocks[b][i];
      net_blocks[b][i] -= lr * v;
    }
  }
}

template <typename Net>
void adam_step(Net& net, Net& grads, AdamState<Net>& state, const AdamConfig& cfg,
               double lr_scale) {
  state.step += 1;
  const double lr = cfg.lr * lr_scale;
  const double bc1 = 1.0 - std::pow(cfg.beta1, static_cast<double>(state.step));
  const double bc2 = 1.0 - std::pow(cfg.beta2, static_cast<double>(state.step));
  std::vector<std::span<double>> net_blocks, grad_blocks, m_blocks, v_blocks;
  for_each_param_block(net, [&](std::span<double> b) { net_blocks.push_back(b); });
  for_each_param_block(grads, [&](std::span<double> b) { grad_blocks.push_back(b); });
  for_each_param_block(state.first_moment,
                       [&](std::span<double> b) { m_blocks.push_back(b); });
  for_each_param_block(state.second_moment,
                       [&](std::span<double> b) { v_blocks.push_back(b); });
  for (std::size_t b = 0; b < net_blocks.size(); ++b) {
    for (std::size_t i = 0; i < net_blocks[b].size(); ++i) {
      const double g = grad_blocks[b][i];
      double& m = m_blocks[b][i];
      double& v = v_blocks[b][i];
      m = cfg.beta1 * m + (1.0 - cfg.beta1) * g;
      v = cfg.beta2 * v + (1.0 - cfg.beta2) * g * g;
      const double mhat = m / bc1;
      const double vhat = v / bc2;
      net_blocks[b][i] -= lr * mhat / (std::sqrt(vhat) + cfg.eps);
    }
  }
}

template void sgd_step<FnnParams>(FnnParams&, FnnParams&, SgdState<FnnParams>&,
                                  const SgdConfig&, double);
template void sgd_step<MultiIndexFnn>(MultiIndexFnn&, MultiIndexFnn&,
                                      SgdState<MultiIndexFnn>&, const SgdConfig&,
                                      double);
template void adam_step<FnnParams>(FnnParams&, FnnParams&, AdamState<FnnParams>&,
                                   const AdamConfig&, double);
template void adam_step<MultiIndexFnn>(MultiIndexFnn&, MultiIndexFnn&,
                                       AdamState<MultiIndexFnn>&,
                                       const AdamConfig&, double);

namespace {

template <typename Net>
void accumulate_sample_gradient(const Net& net, std::span<const double> input,
                                std::span<const double> target, double scale,
                                Net& grads, FnnWorkspace& ws) {
  std::vector<double> out;
  if constexpr (std::is_same_v<Net, FnnParams>) {
    fnn_forward(net, input, ws, out);
  } else {
    out = multi_index_forward(net, input);
  }
  std::vector<double> upstream(out.size());
  for (std::size_t j = 0; j < out.size(); ++j)
    upstream[j] = scale * 2.0 * (out[j] - target[j]);
  if constexpr (std::is_same_v<Net, FnnParams>) {
    fnn_backward(net, ws, input, upstream, grads);
  } else {
    multi_index_backward(net, input, upstream, grads);
  }
}

template <typename Net>
TrainResult<Net> run_training(const EncodedDataset& data, Net net,
                              const TrainConfig& cfg) {
  const std::size_t count = data.size();
  if (cfg.batch_size < 1) throw ConfigError("stage2: batch_size must be >= 1");
  if (count < static_cast<std::size_t>(cfg.batch_size))
    throw ConfigError("stage2: need n >= batch_size");

  Rng rng(cfg.seed);
  Net grads = zeros_like(net);
  SgdState<Net> sgd_state{zeros_like(net)};
  AdamState<Net> adam_state{zeros_like(net), zeros_like(net), 0};
  FnnWorkspace ws;

  TrainTrace trace;
  double best_risk = empirical_risk(net, data);
  if (!std::isfinite(best_risk))
    throw DivergenceError("stage2: initial risk is non-finite", trace);
  trace.epoch_risk.emplace_back(0, best_risk);
  trace.best_risk = best_risk;
  trace.best_epoch = 0;
  Net best = net;

  std::vector<std::size_t> perm(count);
  std::iota(perm.begin(), perm.end(), 0);

  double lr_scale = 1.0;
  for (int epoch = 1; epoch <= cfg.epochs; ++epoch) {
    rng.shuffle(perm);
    try {
      for (std::size_t start = 0; start < count;
           start += static_cast<std::size_t>(cfg.batch_size)) {
        const std::size_t stop =
            std::min(count, start + static_cast<std::size_t>(cfg.batch_size));
        const double scale = 1.0 / static_cast<double>(stop - start);
        for_each_param_block(grads, [](std::span<double> b) {
          for (double& value : b) value = 0.0;
        });
        for (std::size_t i = start; i < stop; ++i) {
          const std::size_t sample = perm[i];
          accumulate_sample_gradient(net, data.inputs[sample],
                                     data.targets[sample], scale, grads, ws);
        }
        if (const auto* sgd = std::get_if<SgdConfig>(&cfg.optimizer)) {
          sgd_step(net, grads, sgd_state, *sgd, lr_scale);
        } else {
          adam_step(net, grads, adam_state, std::get<AdamConfig>(cfg.optimizer),
                    lr_scale);
        }
        if (cfg.clamp_kappa) clamp_weights(net, *cfg.clamp_kappa);
      }
    } catch (const NumericError& error) {
      // Mid-epoch overflow is the same failure as a non-finite epoch risk.
      throw DivergenceError(
          "stage2: diverged during epoch " + std::to_string(epoch) + " (" +
              error.what() + ")",
          trace);
    }

    const double risk = empirical_risk(net, data);
    if (!std::isfinite(risk))
      throw DivergenceError("stage2: non-finite risk at epoch " +
                                std::to_string(epoch),
                            trace);
    trace.epoch_risk.emplace_back(epoch, risk);
    if (risk < best_risk) {
      best_risk = risk;
      best = net;
      trace.best_epoch = epoch;
    }
    trace.best_risk = best_risk;
    lr_scale *= cfg.lr_decay;
  }

  return {std::move(best), std::move(trace)};
}

}  // namespace

TrainResult<FnnParams> stage2(const EncodedDataset& data, const ArchClass& arch,
                              const TrainConfig& cfg) {
  return run_training(data, init_params(arch, data.d_x, data.d_y, cfg.seed),
                      cfg);
}

TrainResult<FnnParams> stage2(const EncodedDataset& data, FnnParams initial,
                              const TrainConfig& cfg) {
  return run_training(data, std::move(initial), cfg);
}

TrainResult<MultiIndexFnn> stage2(const EncodedDataset& data,
                                  MultiIndexFnn initial, const TrainConfig& cfg) {
  return run_training(data, std::move(initial), cfg);
}

}  // namespace opres
