#ifndef OPRES_FNN_HPP
#define OPRES_FNN_HPP

#include <cstdint>
#include <span>
#include <variant>
#include <vector>

namespace opres {

/// One affine layer; weights row-major, out_dim x in_dim.
struct FnnLayer {
  int in_dim = 0;
  int out_dim = 0;
  std::vector<double> weights;
  std::vector<double> biases;
};

/// ReLU feedforward network with componentwise output clipping to
/// [-clip_bound, clip_bound]. Layer l applies W_l x + b_l; ReLU follows
/// every layer except the last; the clamp follows the last.
struct FnnParams {
  std::vector<FnnLayer> layers;
  double clip_bound = 1.0;

  int input_dim() const { return layers.empty() ? 0 : layers.front().in_dim; }
  int output_dim() const { return layers.empty() ? 0 : layers.back().out_dim; }
};

/// Scratch space for a forward pass; reused across samples. pre[l] holds
/// the affine output of layer l, post[l] its activation.
struct FnnWorkspace {
  std::vector<std::vector<double>> pre;
  std::vector<std::vector<double>> post;
};

/// Clipped forward map. Output components always lie in [-M, M].
std::vector<double> fnn_forward(const FnnParams& net, std::span<const double> x);
void fnn_forward(const FnnParams& net, std::span<const double> x,
                 FnnWorkspace& ws, std::vector<double>& out);

/// Exact reverse-mode gradients of the clipped forward map, accumulated
/// into grads (same shape as net; see zeros_like). ReLU subgradient at 0
/// is 0; the clip subgradient is 1 on [-M, M] and 0 strictly outside.
/// When input_grad is non-null the gradient w.r.t. x is written there.
/// Requires the workspace of a preceding fnn_forward on the same x.
void fnn_backward(const FnnParams& net, const FnnWorkspace& ws,
                  std::span<const double> x, std::span<const double> upstream,
                  FnnParams& grads, std::vector<double>* input_grad = nullptr);

FnnParams zeros_like(const FnnParams& net);

/// Multi-head network for multi-index targets: output component k is
/// clamp(g_k(V_k^T x), -M, M) with V_k a d_x x d0 matrix (row-major) and
/// g_k a shared-shape scalar-output MLP.
struct MultiIndexHead {
  std::vector<double> projection;  // d_x x d0
  std::vector<FnnLayer> mlp;       // d0 -> ... -> 1, ReLU between layers
};

struct MultiIndexFnn {
  int d_x = 0;
  int d0 = 0;
  double clip_bound = 1.0;
  std::vector<MultiIndexHead> heads;  // one per output component

  int input_dim() const { return d_x; }
  int output_dim() const { return static_cast<int>(heads.size()); }
};

struct MultiIndexWorkspace {
  std::vector<double> features;  // V_k^T x for the head being evaluated
  FnnWorkspace mlp;
};

std::vector<double> multi_index_forward(const MultiIndexFnn& net,
                                        std::span<const double> x);
void multi_index_backward(const MultiIndexFnn& net, std::span<const double> x,
                          std::span<const double> upstream, MultiIndexFnn& grads);

MultiIndexFnn zeros_like(const MultiIndexFnn& net);

/// Architecture classes. Constrained carries the weight-magnitude bound
/// kappa (enforced by clamping after optimizer steps) and the nonzero
/// budget K (reported, never enforced). Both carry the output clip M.
struct ConstrainedArch {
  int depth = 2;           // L
  int width = 1;           // p
  long long max_nonzero = 1;  // K
  double weight_bound = 1.0;  // kappa
  double clip_bound = 1.0;    // M
};

struct UnconstrainedArch {
  int depth = 2;
  int width = 1;
  double clip_bound = 1.0;
};

using ArchClass = std::variant<ConstrainedArch, UnconstrainedArch>;

/// Depth/width pair chosen for the unconstrained class from the sample
/// count, together with the intermediate split it came from. The target
/// product is ceil(d_y^(-d_x/(4+2d_x)) * n^(d_x/(4+2d_x))); depth takes
/// at most ceil(c_l * log2 n) of it and width the remainder. Final sizes
/// pick up the log factors: L = ceil(c_l * Lt * log2(Lt+1)) (at least 2),
/// p = ceil(c_p * pt * log2(pt+1)), M = sqrt(d_y) * lip_ey * radius_y.
struct UnconstrainedSizing {
  UnconstrainedArch arch;
  long long target_product = 1;  // Lt * pt
  int depth_factor = 1;          // Lt
  int width_factor = 1;          // pt
};

UnconstrainedSizing size_unconstrained(long long n, int d_x, int d_y,
                                       double radius_y, double lip_ey,
                                       double c_l = 1.0, double c_p = 1.0);

/// Constrained-class sizes: L = ceil(c_l*(log2 n + log2 d_y)),
/// p = ceil(c_p*(n/d_y)^(d_x/(2+d_x))), K = ceil(c_k*p*log2 n),
/// M = sqrt(d_y)*lip_ey*radius_y,
/// kappa = max{1, M, sqrt(d_x)*lip_ex*radius_x, lip_ey*lip_dx*lip_op}.
ConstrainedArch size_constrained(long long n, int d_x, int d_y, double radius_x,
                                 double radius_y, double lip_ex, double lip_ey,
                                 double lip_dx, double lip_op, double c_l = 1.0,
                                 double c_p = 1.0, double c_k = 1.0);

/// Seeded uniform(-sqrt(6/fan_in), +sqrt(6/fan_in)) weights, zero biases.
FnnParams init_params(const ArchClass& arch, int d_x, int d_y,
                      std::uint64_t seed);

MultiIndexFnn init_multi_index(int d_x, int d0, int d_y, int head_depth,
                               int head_width, double clip_bound,
                               std::uint64_t seed);

/// Applies fn to every parameter block (weights and biases, in a fixed
/// order) of either network type. Used by the optimizer, the kappa clamp
/// and the parameter counters.
template <typename Fn>
void for_each_param_block(FnnParams& net, Fn&& fn) {
  for (auto& layer : net.layers) {
    fn(std::span<double>(layer.weights));
    fn(std::span<double>(layer.biases));
  }
}

template <typename Fn>
void for_each_param_block(MultiIndexFnn& net, Fn&& fn) {
  for (auto& head : net.heads) {
    fn(std::span<double>(head.projection));
    for (auto& layer : head.mlp) {
      fn(std::span<double>(layer.weights));
      fn(std::span<double>(layer.biases));
    }
  }
}

template <typename Fn>
void for_each_param_block(const FnnParams& net, Fn&& fn) {
  for (const auto& layer : net.layers) {
    fn(std::span<const double>(layer.weights));
    fn(std::span<const double>(layer.biases));
  }
}

template <typename Fn>
void for_each_param_block(const MultiIndexFnn& net, Fn&& fn) {
  for (const auto& head : net.heads) {
    fn(std::span<const double>(head.projection));
    for (const auto& layer : head.mlp) {
      fn(std::span<const double>(layer.weights));
      fn(std::span<const double>(layer.biases));
    }
  }
}

/// Clamp every parameter into [-kappa, kappa].
template <typename Net>
void clamp_weights(Net& net, double kappa) {
  for_each_param_block(net, [kappa](std::span<double> block) {
    for (double& value : block) {
      if (value > kappa) value = kappa;
      if (value < -kappa) value = -kappa;
    }
  });
}

/// Number of parameters with |value| > threshold.
template <typename Net>
long long count_nonzero(const Net& net, double threshold = 1e-12) {
  long long count = 0;
  for_each_param_block(net, [&](std::span<const double> block) {
    for (double value : block)
      if (value > threshold || value < -threshold) ++count;
  });
  return count;
}

/// Total parameter count (zeros included).
template <typename Net>
long long parameter_count(const Net& net) {
  long long count = 0;
  for_each_param_block(
      net, [&](std::span<const double> block) { count += block.size(); });
  return count;
}

/// Largest |parameter|.
template <typename Net>
double max_abs_parameter(const Net& net) {
  double peak = 0.0;
  for_each_param_block(net, [&](std::span<const double> block) {
    for (double value : block) {
      const double mag = value < 0 ? -value : value;
      if (mag > peak) peak = mag;
    }
  });
  return peak;
}

}  // namespace opres

#endif
