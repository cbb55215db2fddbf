#include "opres/fnn.hpp"

#include <cmath>
#include <string>

#include "opres/errors.hpp"
#include "opres/rng.hpp"

namespace opres {

namespace {

void affine(const FnnLayer& layer, std::span<const double> x,
            std::vector<double>& out) {
  if (static_cast<int>(x.size()) != layer.in_dim)
    throw DimensionError("fnn: layer expects input of size " +
                         std::to_string(layer.in_dim) + ", got " +
                         std::to_string(x.size()));
  out.assign(layer.out_dim, 0.0);
  for (int row = 0; row < layer.out_dim; ++row) {
    double acc = layer.biases[row];
    const double* w = layer.weights.data() + static_cast<std::size_t>(row) * layer.in_dim;
    for (int col = 0; col < layer.in_dim; ++col) acc += w[col] * x[col];
    out[row] = acc;
  }
}

double clamp_to(double value, double bound) {
  if (value > bound) return bound;
  if (value < -bound) return -bound;
  return value;
}

// Runs the unclipped MLP body shared by FnnParams and the multi-index
// heads; fills ws.pre/ws.post and returns the last affine output in
// ws.pre.back().
void mlp_forward(const std::vector<FnnLayer>& layers, std::span<const double> x,
                 FnnWorkspace& ws) {
  const std::size_t depth = layers.size();
  ws.pre.resize(depth);
  ws.post.resize(depth);
  std::span<const double> current = x;
  for (std::size_t l = 0; l < depth; ++l) {
    affine(layers[l], current, ws.pre[l]);
    if (l + 1 < depth) {
      ws.post[l] = ws.pre[l];
      for (double& value : ws.post[l])
        if (value < 0.0) value = 0.0;
      current = ws.post[l];
    }
  }
}

// Reverse pass through the unclipped MLP body. upstream is d(loss)/d(last
// affine output). Accumulates into grads and optionally writes the input
// gradient.
void mlp_backward(const std::vector<FnnLayer>& layers, const FnnWorkspace& ws,
                  std::span<const double> x, std::vector<double> delta,
                  std::vector<FnnLayer>& grads,
                  std::vector<double>* input_grad) {
  for (int l = static_cast<int>(layers.size()) - 1; l >= 0; --l) {
    const FnnLayer& layer = layers[l];
    FnnLayer& g = grads[l];
    std::span<const double> below =
        l == 0 ? x : std::span<const double>(ws.post[l - 1]);

    for (int row = 0; row < layer.out_dim; ++row) {
      const double d = delta[row];
      if (!std::isfinite(d))
        throw NumericError("fnn backward: non-finite gradient at layer " +
                           std::to_string(l + 1));
      g.biases[row] += d;
      double* grow = g.weights.data() + static_cast<std::size_t>(row) * layer.in_dim;
      for (int col = 0; col < layer.in_dim; ++col) grow[col] += d * below[col];
    }

    if (l == 0) {
      if (input_grad) {
        input_grad->assign(layer.in_dim, 0.0);
        for (int row = 0; row < layer.out_dim; ++row) {
          const double d = delta[row];
          const double* w =
              layer.weights.data() + static_cast<std::size_t>(row) * layer.in_dim;
          for (int col = 0; col < layer.in_dim; ++col)
            (*input_grad)[col] += d * w[col];
        }
      }
      return;
    }

    std::vector<double> next(layer.in_dim, 0.0);
    for (int row = 0; row < layer.out_dim; ++row) {
      const double d = delta[row];
      const double* w =
          layer.weights.data() + static_cast<std::size_t>(row) * layer.in_dim;
      for (int col = 0; col < layer.in_dim; ++col) next[col] += d * w[col];
    }
    // ReLU gate of the layer below; subgradient at exactly 0 is 0.
    for (int col = 0; col < layer.in_dim; ++col)
      if (ws.pre[l - 1][col] <= 0.0) next[col] = 0.0;
    delta = std::move(next);
  }
}

}  // namespace

void fnn_forward(const FnnParams& net, std::span<const double> x,
                 FnnWorkspace& ws, std::vector<double>& out) {
  if (net.layers.empty()) throw DimensionError("fnn_forward: empty network");
  mlp_forward(net.layers, x, ws);
  out = ws.pre.back();
  for (double& value : out) value = clamp_to(value, net.clip_bound);
}

std::vector<double> fnn_forward(const FnnParams& net, std::span<const double> x) {
  FnnWorkspace ws;
  std::vector<double> out;
  fnn_forward(net, x, ws, out);
  return out;
}

void fnn_backward(const FnnParams& net, const FnnWorkspace& ws,
                  std::span<const double> x, std::span<const double> upstream,
                  FnnParams& grads, std::vector<double>* input_grad) {
  const std::vector<double>& last = ws.pre.back();
  if (upstream.size() != last.size())
    throw DimensionError("fnn_backward: upstream gradient size mismatch");
  std::vector<double> delta(upstream.begin(), upstream.end());
  // Clip gate: passthrough on [-M, M] (boundary treated as interior),
  // zero strictly outside.
  for (std::size_t i = 0; i < delta.size(); ++i)
    if (std::abs(last[i]) > net.clip_bound) delta[i] = 0.0;
  mlp_backward(net.layers, ws, x, std::move(delta), grads.layers, input_grad);
}

FnnParams zeros_like(const FnnParams& net) {
  FnnParams zeroed = net;
  for (auto& layer : zeroed.layers) {
    layer.weights.assign(layer.weights.size(), 0.0);
    layer.biases.assign(layer.biases.size(), 0.0);
  }
  return zeroed;
}

std::vector<double> multi_index_forward(const MultiIndexFnn& net,
                                        std::span<const double> x) {
  if (static_cast<int>(x.size()) != net.d_x)
    throw DimensionError("multi_index_forward: input size != d_x");
  std::vector<double> out(net.heads.size());
  MultiIndexWorkspace ws;
  for (std::size_t k = 0; k < net.heads.size(); ++k) {
    const MultiIndexHead& head = net.heads[k];
    ws.features.assign(net.d0, 0.0);
    for (int i = 0; i < net.d_x; ++i) {
      const double xi = x[i];
      const double* vrow = head.projection.data() + static_cast<std::size_t>(i) * net.d0;
      for (int j = 0; j < net.d0; ++j) ws.features[j] += vrow[j] * xi;
    }
    mlp_forward(head.mlp, ws.features, ws.mlp);
    out[k] = clamp_to(ws.mlp.pre.back()[0], net.clip_bound);
  }
  return out;
}

void multi_index_backward(const MultiIndexFnn& net, std::span<const double> x,
                          std::span<const double> upstream,
                          MultiIndexFnn& grads) {
  if (upstream.size() != net.heads.size())
    throw DimensionError("multi_index_backward: upstream size != head count");
  MultiIndexWorkspace ws;
  std::vector<double> feature_grad;
  for (std::size_t k = 0; k < net.heads.size(); ++k) {
    const MultiIndexHead& head = net.heads[k];
    ws.features.assign(net.d0, 0.0);
    for (int i = 0; i < net.d_x; ++i) {
      const double xi = x[i];
      const double* vrow = head.projection.data() + static_cast<std::size_t>(i) * net.d0;
      for (int j = 0; j < net.d0; ++j) ws.features[j] += vrow[j] * xi;
    }
    mlp_forward(head.mlp, ws.features, ws.mlp);

    double delta = upstream[k];
    if (std::abs(ws.mlp.pre.back()[0]) > net.clip_bound) delta = 0.0;
    std::vector<double> head_delta{delta};
    mlp_backward(head.mlp, ws.mlp, ws.features, std::move(head_delta),
                 grads.heads[k].mlp, &feature_grad);

    double* gproj = grads.heads[k].projection.data();
    for (int i = 0; i < net.d_x; ++i) {
      const double xi = x[i];
      for (int j = 0; j < net.d0; ++j)
        gproj[static_cast<std::size_t>(i) * net.d0 + j] += xi * feature_grad[j];
    }
  }
}

MultiIndexFnn zeros_like(const MultiIndexFnn& net) {
  MultiIndexFnn zeroed = net;
  for (auto& head : zeroed.heads) {
    head.projection.assign(head.projection.size(), 0.0);
    for (auto& layer : head.mlp) {
      layer.weights.assign(layer.weights.size(), 0.0);
      layer.biases.assign(layer.biases.size(), 0.0);
    }
  }
  return zeroed;
}

namespace {

// Ceiling with a relative snap to the nearest integer, so exact-arithmetic
// values like 2^2.5 * 2^-0.5 = 4 do not round up to 5 through pow() dust.
long long ceil_positive(double value) {
  const double nearest = std::round(value);
  if (std::abs(value - nearest) <= 1e-9 * std::max(1.0, std::abs(value)))
    value = nearest;
  const long long up = static_cast<long long>(std::ceil(value));
  return up < 1 ? 1 : up;
}

}  // namespace

UnconstrainedSizing size_unconstrained(long long n, int d_x, int d_y,
                                       double radius_y, double lip_ey,
                                       double c_l, double c_p) {
  if (n < 2 || d_x < 1 || d_y < 1)
    throw ConfigError("size_unconstrained: need n >= 2 and positive dims");
  const double exponent = static_cast<double>(d_x) / (4.0 + 2.0 * d_x);
  const double raw = std::pow(static_cast<double>(d_y), -exponent) *
                     std::pow(static_cast<double>(n), exponent);
  const long long target = ceil_positive(raw);
  const long long depth_cap = ceil_positive(c_l * std::log2(static_cast<double>(n)));
  const long long lt = std::min<long long>(target, depth_cap);
  const long long pt = (target + lt - 1) / lt;  // ceil(target / lt)

  UnconstrainedSizing sizing;
  sizing.target_product = target;
  sizing.depth_factor = static_cast<int>(lt);
  sizing.width_factor = static_cast<int>(pt);
  long long depth = ceil_positive(c_l * lt * std::log2(static_cast<double>(lt) + 1.0));
  if (depth < 2) depth = 2;  // at least one hidden layer
  const long long width =
      ceil_positive(c_p * pt * std::log2(static_cast<double>(pt) + 1.0));
  sizing.arch.depth = static_cast<int>(depth);
  sizing.arch.width = static_cast<int>(width);
  sizing.arch.clip_bound = std::sqrt(static_cast<double>(d_y)) * lip_ey * radius_y;
  return sizing;
}

ConstrainedArch size_constrained(long long n, int d_x, int d_y, double radius_x,
                                 double radius_y, double lip_ex, double lip_ey,
                                 double lip_dx, double lip_op, double c_l,
                                 double c_p, double c_k) {
  if (n < 2 || d_x < 1 || d_y < 1)
    throw ConfigError("size_constrained: need n >= 2 and positive dims");
  ConstrainedArch arch;
  const double log2n = std::log2(static_cast<double>(n));
  long long depth =
      ceil_positive(c_l * (log2n + std::log2(static_cast<double>(d_y))));
  if (depth < 2) depth = 2;
  arch.depth = static_cast<int>(depth);
  const double exponent = static_cast<double>(d_x) / (2.0 + d_x);
  arch.width = static_cast<int>(
      ceil_positive(c_p * std::pow(static_cast<double>(n) / d_y, exponent)));
  arch.max_nonzero = ceil_positive(c_k * arch.width * log2n);
  arch.clip_bound = std::sqrt(static_cast<double>(d_y)) * lip_ey * radius_y;
  const double candidates[] = {1.0, arch.clip_bound,
                               std::sqrt(static_cast<double>(d_x)) * lip_ex * radius_x,
                               lip_ey * lip_dx * lip_op};
  double kappa = candidates[0];
  for (double c : candidates)
    if (c > kappa) kappa = c;
  arch.weight_bound = kappa;
  return arch;
}

namespace {

FnnLayer random_layer(int in_dim, int out_dim, Rng& rng) {
  FnnLayer layer;
  layer.in_dim = in_dim;
  layer.out_dim = out_dim;
  layer.weights.resize(static_cast<std::size_t>(in_dim) * out_dim);
  const double bound = std::sqrt(6.0 / in_dim);
  for (double& w : layer.weights) w = rng.uniform(-bound, bound);
  layer.biases.assign(out_dim, 0.0);
  return layer;
}

}  // namespace

FnnParams init_params(const ArchClass& arch, int d_x, int d_y,
                      std::uint64_t seed) {
  int depth = 0, width = 0;
  double clip = 1.0;
  if (const auto* c = std::get_if<ConstrainedArch>(&arch)) {
    depth = c->depth;
    width = c->width;
    clip = c->clip_bound;
  } else {
    const auto& u = std::get<UnconstrainedArch>(arch);
    depth = u.depth;
    width = u.width;
    clip = u.clip_bound;
  }
  if (depth < 2) throw ConfigError("init_params: depth must be >= 2");
  if (width < 1) throw ConfigError("init_params: width must be >= 1");

  Rng rng(seed);
  FnnParams net;
  net.clip_bound = clip;
  net.layers.reserve(depth);
  int below = d_x;
  for (int l = 0; l < depth - 1; ++l) {
    net.layers.push_back(random_layer(below, width, rng));
    below = width;
  }
  net.layers.push_back(random_layer(below, d_y, rng));
  return net;
}

MultiIndexFnn init_multi_index(int d_x, int d0, int d_y, int head_depth,
                               int head_width, double clip_bound,
                               std::uint64_t seed) {
  if (head_depth < 2) throw ConfigError("init_multi_index: head depth must be >= 2");
  if (d0 < 1 || d0 > d_x)
    throw ConfigError("init_multi_index: need 1 <= d0 <= d_x");
  Rng rng(seed);
  MultiIndexFnn net;
  net.d_x = d_x;
  net.d0 = d0;
  net.clip_bound = clip_bound;
  net.heads.resize(d_y);
  const double vbound = std::sqrt(6.0 / d_x);
  for (auto& head : net.heads) {
    head.projection.resize(static_cast<std::size_t>(d_x) * d0);
    for (double& v : head.projection) v = rng.uniform(-vbound, vbound);
    int below = d0;
    for (int l = 0; l < head_depth - 1; ++l) {
      head.mlp.push_back(random_layer(below, head_width, rng));
      below = head_width;
    }
    head.mlp.push_back(random_layer(below, 1, rng));
  }
  return net;
}

}  // namespace opres
