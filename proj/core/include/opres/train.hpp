#ifndef OPRES_TRAIN_HPP
#define OPRES_TRAIN_HPP

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "opres/basis.hpp"
#include "opres/errors.hpp"
#include "opres/fnn.hpp"
#include "opres/pca.hpp"
#include "opres/quadrature.hpp"

namespace opres {

struct DatasetMeta {
  std::uint64_t seed = 0;
  std::string operator_id;
  double noise_sigma = 0.0;
};

/// Paired samples (u_i, v_i) on one shared grid.
struct Dataset {
  GridPtr grid;
  std::vector<GridFunction> inputs;
  std::vector<GridFunction> outputs;
  DatasetMeta meta;

  std::size_t size() const { return inputs.size(); }
};

struct EncodedDataset {
  int d_x = 0;
  int d_y = 0;
  std::vector<std::vector<double>> inputs;
  std::vector<std::vector<double>> targets;

  std::size_t size() const { return inputs.size(); }
};

/// Positional split: S1 = first ceil(fraction * count) pairs, S2 = rest.
/// Order preserved; throws when either part would be empty.
std::pair<Dataset, Dataset> split(const Dataset& dataset, double fraction = 0.5);

/// Encoder/decoder pair for the X and Y spaces. Basis pairs are
/// deterministic; PCA pairs come out of Stage 1. All four maps are
/// 1-Lipschitz and the decoders are isometries.
struct BasisEncoderPair {
  BasisSpec spec_x;
  BasisSpec spec_y;
};
struct PcaEncoderPair {
  PcaModel model_x;
  PcaModel model_y;
};

struct EncoderPair {
  std::variant<BasisEncoderPair, PcaEncoderPair> impl;

  int d_x() const;
  int d_y() const;
  std::vector<double> encode_x(const GridFunction& u) const;
  std::vector<double> encode_y(const GridFunction& v) const;
  GridFunction decode_x(std::span<const double> a, const GridPtr& grid) const;
  GridFunction decode_y(std::span<const double> a, const GridPtr& grid) const;
  GridFunction project_x(const GridFunction& u) const;
  GridFunction project_y(const GridFunction& v) const;
  // Lemma-level constants; 1 for every pair built here.
  double lip_encode_x() const { return 1.0; }
  double lip_encode_y() const { return 1.0; }
  double lip_decode_x() const { return 1.0; }
  double lip_decode_y() const { return 1.0; }
};

struct BasisStage1Choice {
  BasisSpec spec_x;
  BasisSpec spec_y;
};
struct PcaStage1Choice {
  int d_x = 1;
  int d_y = 1;
};
using Stage1Choice = std::variant<BasisStage1Choice, PcaStage1Choice>;

/// Stage 1 of the two-stage algorithm. Basis choices ignore S1 and return
/// the deterministic pair; PCA fits model_x on the inputs and model_y on
/// the (noisy) outputs of S1.
EncoderPair stage1(const Dataset& s1, const Stage1Choice& choice);

EncodedDataset encode_dataset(const Dataset& s2, const EncoderPair& encoders);

/// Mean squared encoded-space residual (1/n) sum ||net(a_i) - b_i||_2^2.
double empirical_risk(const FnnParams& net, const EncodedDataset& data);
double empirical_risk(const MultiIndexFnn& net, const EncodedDataset& data);

struct SgdConfig {
  double lr = 1e-2;
  double momentum = 0.0;
};
struct AdamConfig {
  double lr = 1e-3;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double eps = 1e-8;
};
using OptimizerConfig = std::variant<SgdConfig, AdamConfig>;

struct TrainConfig {
  OptimizerConfig optimizer = AdamConfig{};
  int batch_size = 32;
  int epochs = 2000;
  std::uint64_t seed = 0;
  std::optional<double> clamp_kappa;  // post-step weight clamp when set
  double lr_decay = 1.0;              // multiplicative per epoch
};

/// Full-S2 risk after every epoch; row 0 is the pre-training risk.
struct TrainTrace {
  std::vector<std::pair<int, double>> epoch_risk;
  double best_risk = 0.0;
  int best_epoch = 0;
};

/// Training divergence; carries the trace up to the last finite epoch.
struct DivergenceError : NumericError {
  DivergenceError(const std::string& w, TrainTrace trace)
      : NumericError(w), trace(std::move(trace)) {}
  TrainTrace trace;
};

/// Stage 2: seeded minibatch gradient descent on the empirical risk with
/// per-epoch shuffling; returns the parameter snapshot with the lowest
/// full-S2 risk seen at any epoch end. Deterministic per (data, cfg).
template <typename Net>
struct TrainResult {
  Net net;
  TrainTrace trace;
};

TrainResult<FnnParams> stage2(const EncodedDataset& data, const ArchClass& arch,
                              const TrainConfig& cfg);
TrainResult<FnnParams> stage2(const EncodedDataset& data, FnnParams initial,
                              const TrainConfig& cfg);
TrainResult<MultiIndexFnn> stage2(const EncodedDataset& data,
                                  MultiIndexFnn initial, const TrainConfig& cfg);

/// Optimizer state shaped like the network it updates.
template <typename Net>
struct SgdState {
  Net velocity;
};
template <typename Net>
struct AdamState {
  Net first_moment;
  Net second_moment;
  long long step = 0;
};

template <typename Net>
void sgd_step(Net& net, Net& grads, SgdState<Net>& state, const SgdConfig& cfg,
              double lr_scale = 1.0);
template <typename Net>
void adam_step(Net& net, Net& grads, AdamState<Net>& state, const AdamConfig& cfg,
               double lr_scale = 1.0);

}  // namespace opres

#endif
