#include "opres/problems.hpp"

#include <cmath>

#include "opres/errors.hpp"

namespace opres {

namespace {
constexpr double kPi = 3.14159265358979323846;
}

double ScalarFn::eval(std::span<const double> z) const {
  switch (kind) {
    case ScalarFnKind::sine_sum: {
      double s = 0.0;
      for (double v : z) s += v;
      return std::sin(s);
    }
    case ScalarFnKind::cosine_sum: {
      double s = 0.0;
      for (double v : z) s += v;
      return std::cos(s);
    }
    case ScalarFnKind::quad_plus_linear:
      return z[0] * z[0] + (z.size() > 1 ? z[1] : 0.0);
    case ScalarFnKind::linear_sum: {
      double s = 0.0;
      for (double v : z) s += v;
      return s;
    }
  }
  throw InternalError("ScalarFn::eval: unknown kind");
}

double ScalarFn::lipschitz(int arity, double radius) const {
  switch (kind) {
    case ScalarFnKind::sine_sum:
    case ScalarFnKind::cosine_sum:
    case ScalarFnKind::linear_sum:
      return std::sqrt(static_cast<double>(arity));
    case ScalarFnKind::quad_plus_linear:
      // gradient (2 z_1, 1, 0, ...) on |z_1| <= radius
      return std::sqrt(4.0 * radius * radius + (arity > 1 ? 1.0 : 0.0));
  }
  throw InternalError("ScalarFn::lipschitz: unknown kind");
}

double ScalarFn::max_abs(int arity, double radius) const {
  switch (kind) {
    case ScalarFnKind::sine_sum:
    case ScalarFnKind::cosine_sum:
      return 1.0;
    case ScalarFnKind::quad_plus_linear:
      return radius * radius + (arity > 1 ? radius : 0.0);
    case ScalarFnKind::linear_sum:
      return arity * radius;
  }
  throw InternalError("ScalarFn::max_abs: unknown kind");
}

ScalarFn scalar_fn_from_name(const std::string& name) {
  if (name == "sine") return {ScalarFnKind::sine_sum};
  if (name == "cosine") return {ScalarFnKind::cosine_sum};
  if (name == "quadratic") return {ScalarFnKind::quad_plus_linear};
  if (name == "linear") return {ScalarFnKind::linear_sum};
  throw ConfigError("unknown scalar function '" + name +
                    "' (expected sine|cosine|quadratic|linear)");
}

std::string to_string(ScalarFnKind kind) {
  switch (kind) {
    case ScalarFnKind::sine_sum: return "sine";
    case ScalarFnKind::cosine_sum: return "cosine";
    case ScalarFnKind::quad_plus_linear: return "quadratic";
    case ScalarFnKind::linear_sum: return "linear";
  }
  return "?";
}

MultiIndexTrigOp make_multi_index_op(int d_x, int d_y, int d0,
                                     const std::vector<ScalarFn>& links,
                                     double input_radius, std::uint64_t seed) {
  if (static_cast<int>(links.size()) != d_y)
    throw ConfigError("make_multi_index_op: need one link per output head");
  if (d0 < 1 || d0 > d_x)
    throw ConfigError("make_multi_index_op: need 1 <= d0 <= d_x");
  MultiIndexTrigOp op;
  op.d_x = d_x;
  op.d_y = d_y;
  op.d0 = d0;
  op.links = links;
  Rng rng(seed);
  op.projections.resize(d_y);
  op.link_lipschitz.resize(d_y);
  for (int k = 0; k < d_y; ++k) {
    auto& v = op.projections[k];
    v.resize(static_cast<std::size_t>(d_x) * d0);
    for (double& entry : v) entry = rng.symmetric_unit();
    // Unit columns keep the feature scale independent of d_x.
    for (int j = 0; j < d0; ++j) {
      double sq = 0.0;
      for (int i = 0; i < d_x; ++i) {
        const double entry = v[static_cast<std::size_t>(i) * d0 + j];
        sq += entry * entry;
      }
      const double len = std::sqrt(sq);
      if (len == 0.0) throw InternalError("make_multi_index_op: zero column");
      for (int i = 0; i < d_x; ++i) v[static_cast<std::size_t>(i) * d0 + j] /= len;
    }
    // ||V_k||_op <= sqrt(d0) for unit columns; the feature box radius is
    // bounded by that times the input radius.
    const double feature_radius = std::sqrt(static_cast<double>(d0)) * input_radius;
    op.link_lipschitz[k] = links[k].lipschitz(d0, feature_radius);
  }
  return op;
}

std::string operator_id(const OperatorSpec& op) {
  if (const auto* heat = std::get_if<HeatSemigroupOp>(&op))
    return "heat(t=" + std::to_string(heat->t) +
           ",cap=" + std::to_string(heat->mode_cap) + ")";
  if (const auto* shift = std::get_if<ShiftOp>(&op))
    return "shift(s=" + std::to_string(shift->shift) +
           ",cap=" + std::to_string(shift->mode_cap) + ")";
  const auto& mi = std::get<MultiIndexTrigOp>(op);
  std::string id = "multi_index(dx=" + std::to_string(mi.d_x) +
                   ",dy=" + std::to_string(mi.d_y) +
                   ",d0=" + std::to_string(mi.d0) + ",g=";
  for (std::size_t k = 0; k < mi.links.size(); ++k) {
    if (k) id += "+";
    id += to_string(mi.links[k].kind);
  }
  return id + ")";
}

namespace {

// Trig span covering frequencies 1..cap: indices 2..2cap+1 of the trig
// sequence sit at components 1..2cap of a full order-(2cap+1) spec.
BasisSpec periodic_span_spec(int mode_cap) {
  return BasisSpec{BasisKind::trigonometric, 1, 2 * mode_cap + 1};
}

int span_mode_cap(const OperatorSpec& op) {
  if (const auto* heat = std::get_if<HeatSemigroupOp>(&op)) return heat->mode_cap;
  if (const auto* shift = std::get_if<ShiftOp>(&op)) return shift->mode_cap;
  throw InternalError("span_mode_cap: not a periodic-span operator");
}

}  // namespace

BasisSpec operator_output_span(const OperatorSpec& op) {
  if (const auto* mi = std::get_if<MultiIndexTrigOp>(&op))
    return BasisSpec{BasisKind::trigonometric, 1, mi->d_y};
  return periodic_span_spec(span_mode_cap(op));
}

CoefficientDecayLaw make_decay_law(const BasisSpec& spec, double amplitude,
                                   double beta) {
  CoefficientDecayLaw law;
  law.spec = spec;
  law.amplitudes.resize(spec.encode_dim());
  for (int k = 0; k < spec.encode_dim(); ++k)
    law.amplitudes[k] = amplitude * std::pow(static_cast<double>(k + 1), -beta);
  return law;
}

CoefficientDecayLaw make_operator_span_decay_law(const OperatorSpec& op,
                                                 double amplitude, double beta) {
  if (std::holds_alternative<MultiIndexTrigOp>(op)) {
    const auto& mi = std::get<MultiIndexTrigOp>(op);
    return make_decay_law(BasisSpec{BasisKind::trigonometric, 1, mi.d_x},
                          amplitude, beta);
  }
  const int cap = span_mode_cap(op);
  CoefficientDecayLaw law;
  law.spec = periodic_span_spec(cap);
  law.amplitudes.assign(law.spec.encode_dim(), 0.0);
  // Component 0 is the constant mode, outside the operator span.
  for (int j = 1; j <= 2 * cap; ++j)
    law.amplitudes[j] = amplitude * std::pow(static_cast<double>(j), -beta);
  return law;
}

GridFunction sample_input(const InputLaw& law, Rng& rng, const GridPtr& grid) {
  if (const auto* decay = std::get_if<CoefficientDecayLaw>(&law)) {
    if (grid->order < decay->spec.min_grid_order())
      throw ConfigError("sample_input: grid order " +
                        std::to_string(grid->order) + " < required " +
                        std::to_string(decay->spec.min_grid_order()));
    std::vector<double> coeffs(decay->amplitudes.size());
    for (std::size_t k = 0; k < coeffs.size(); ++k)
      coeffs[k] = decay->amplitudes[k] * rng.symmetric_unit();
    return decode(decay->spec, coeffs, grid);
  }
  const auto& manifold = std::get<ManifoldLaw>(law);
  if (grid->order < manifold.spec.min_grid_order())
    throw ConfigError("sample_input: grid order too coarse for manifold law");
  const int d_x = manifold.spec.encode_dim();
  if (static_cast<int>(manifold.maps.size()) != d_x - manifold.d0)
    throw ConfigError("sample_input: manifold law needs d_x - d0 maps");
  std::vector<double> coeffs(d_x);
  for (int k = 0; k < manifold.d0; ++k)
    coeffs[k] = rng.uniform(-manifold.box_halfwidth, manifold.box_halfwidth);
  const std::span<const double> free(coeffs.data(), manifold.d0);
  for (int k = manifold.d0; k < d_x; ++k)
    coeffs[k] = manifold.maps[k - manifold.d0].eval(free);
  return decode(manifold.spec, coeffs, grid);
}

double law_radius(const InputLaw& law) {
  if (const auto* decay = std::get_if<CoefficientDecayLaw>(&law)) {
    double sq = 0.0;
    for (double a : decay->amplitudes) sq += a * a;
    return std::sqrt(sq);
  }
  const auto& manifold = std::get<ManifoldLaw>(law);
  double sq = manifold.d0 * manifold.box_halfwidth * manifold.box_halfwidth;
  for (const ScalarFn& g : manifold.maps) {
    const double peak = g.max_abs(manifold.d0, manifold.box_halfwidth);
    sq += peak * peak;
  }
  return std::sqrt(sq);
}

std::string input_law_id(const InputLaw& law) {
  if (const auto* decay = std::get_if<CoefficientDecayLaw>(&law))
    return "decay(" + to_string(decay->spec.kind) + ",d=" +
           std::to_string(decay->spec.encode_dim()) + ")";
  const auto& manifold = std::get<ManifoldLaw>(law);
  return "manifold(d0=" + std::to_string(manifold.d0) +
         ",dx=" + std::to_string(manifold.spec.encode_dim()) + ")";
}

namespace {

// Coefficients of u in the operator's periodic span, with the residual
// check shared by heat and shift. Component 0 (constant) counts as
// out-of-span energy.
std::vector<double> span_coefficients(const GridFunction& u, int mode_cap,
                                      const char* who) {
  const BasisSpec spec = periodic_span_spec(mode_cap);
  std::vector<double> coeffs = encode(spec, u);
  const GridFunction back = decode(spec, coeffs, u.grid);
  const double tail = distance(u, back);
  double outside = tail * tail + coeffs[0] * coeffs[0];
  if (outside > 1e-8)
    throw NumericError(std::string(who) + ": input has " +
                       std::to_string(outside) +
                       " squared norm outside the periodic span (cap=" +
                       std::to_string(mode_cap) + ")");
  coeffs[0] = 0.0;
  return coeffs;
}

}  // namespace

GridFunction apply_operator(const OperatorSpec& op, const GridFunction& u) {
  if (const auto* heat = std::get_if<HeatSemigroupOp>(&op)) {
    std::vector<double> coeffs = span_coefficients(u, heat->mode_cap, "heat");
    for (int k = 1; k <= heat->mode_cap; ++k) {
      const double damp = std::exp(-(k * kPi) * (k * kPi) * heat->t);
      coeffs[2 * k - 1] *= damp;  // sin(k pi x)
      coeffs[2 * k] *= damp;      // cos(k pi x)
    }
    return decode(periodic_span_spec(heat->mode_cap), coeffs, u.grid);
  }
  if (const auto* shift = std::get_if<ShiftOp>(&op)) {
    std::vector<double> coeffs = span_coefficients(u, shift->mode_cap, "shift");
    for (int k = 1; k <= shift->mode_cap; ++k) {
      const double angle = k * kPi * shift->shift;
      const double c = std::cos(angle), s = std::sin(angle);
      const double a = coeffs[2 * k - 1];  // sin coefficient
      const double b = coeffs[2 * k];      // cos coefficient
      coeffs[2 * k - 1] = c * a + s * b;
      coeffs[2 * k] = -s * a + c * b;
    }
    return decode(periodic_span_spec(shift->mode_cap), coeffs, u.grid);
  }

  const auto& mi = std::get<MultiIndexTrigOp>(op);
  const BasisSpec in_spec{BasisKind::trigonometric, 1, mi.d_x};
  const std::vector<double> a = encode(in_spec, u);
  std::vector<double> out(mi.d_y);
  std::vector<double> features(mi.d0);
  for (int k = 0; k < mi.d_y; ++k) {
    const auto& v = mi.projections[k];
    for (int j = 0; j < mi.d0; ++j) {
      double acc = 0.0;
      for (int i = 0; i < mi.d_x; ++i)
        acc += v[static_cast<std::size_t>(i) * mi.d0 + j] * a[i];
      features[j] = acc;
    }
    out[k] = mi.links[k].eval(features);
  }
  return decode(BasisSpec{BasisKind::trigonometric, 1, mi.d_y}, out, u.grid);
}

namespace {

// Largest singular value of the d_x x d0 projection via power iteration
// on V^T V.
double operator_two_norm(const std::vector<double>& v, int d_x, int d0) {
  std::vector<double> gram(static_cast<std::size_t>(d0) * d0, 0.0);
  for (int i = 0; i < d_x; ++i)
    for (int a = 0; a < d0; ++a)
      for (int b = 0; b < d0; ++b)
        gram[a * d0 + b] += v[static_cast<std::size_t>(i) * d0 + a] *
                            v[static_cast<std::size_t>(i) * d0 + b];
  std::vector<double> x(d0, 1.0), y(d0);
  double lambda = 0.0;
  for (int iter = 0; iter < 500; ++iter) {
    for (int a = 0; a < d0; ++a) {
      double acc = 0.0;
      for (int b = 0; b < d0; ++b) acc += gram[a * d0 + b] * x[b];
      y[a] = acc;
    }
    double len = 0.0;
    for (double value : y) len += value * value;
    len = std::sqrt(len);
    if (len == 0.0) return 0.0;
    for (int a = 0; a < d0; ++a) x[a] = y[a] / len;
    if (std::abs(len - lambda) <= 1e-14 * std::max(1.0, lambda)) {
      lambda = len;
      break;
    }
    lambda = len;
  }
  return std::sqrt(lambda);
}

}  // namespace

double operator_lipschitz_constant(const OperatorSpec& op) {
  if (const auto* heat = std::get_if<HeatSemigroupOp>(&op))
    return std::exp(-kPi * kPi * heat->t);  // max over frequencies 1..cap
  if (std::holds_alternative<ShiftOp>(op)) return 1.0;
  const auto& mi = std::get<MultiIndexTrigOp>(op);
  double sq = 0.0;
  for (int k = 0; k < mi.d_y; ++k) {
    const double vnorm = operator_two_norm(mi.projections[k], mi.d_x, mi.d0);
    const double term = mi.link_lipschitz[k] * vnorm;
    sq += term * term;
  }
  return std::sqrt(sq);
}

double operator_output_radius(const OperatorSpec& op, double input_radius) {
  if (const auto* mi = std::get_if<MultiIndexTrigOp>(&op)) {
    // Links need not vanish at 0, so bound outputs directly.
    double sq = 0.0;
    for (int k = 0; k < mi->d_y; ++k) {
      const double vnorm = operator_two_norm(mi->projections[k], mi->d_x, mi->d0);
      const double peak = mi->links[k].max_abs(mi->d0, vnorm * input_radius);
      sq += peak * peak;
    }
    return std::sqrt(sq);
  }
  return operator_lipschitz_constant(op) * input_radius;
}

NoiseLaw make_noise_law(const OperatorSpec& op, double sigma) {
  if (sigma < 0.0) throw ConfigError("make_noise_law: sigma must be >= 0");
  NoiseLaw law;
  law.sigma = sigma;
  law.spec = operator_output_span(op);
  law.amplitudes.assign(law.spec.encode_dim(), 0.0);
  if (std::holds_alternative<MultiIndexTrigOp>(op)) {
    const int count = law.spec.encode_dim();
    for (int k = 0; k < count; ++k)
      law.amplitudes[k] = sigma / std::sqrt(static_cast<double>(count));
  } else {
    const int cap = span_mode_cap(op);
    const int count = 2 * cap;
    for (int j = 1; j <= count; ++j)
      law.amplitudes[j] = sigma / std::sqrt(static_cast<double>(count));
  }
  return law;
}

GridFunction sample_noise(const NoiseLaw& law, Rng& rng, const GridPtr& grid) {
  std::vector<double> coeffs(law.amplitudes.size());
  double sq = 0.0;
  for (std::size_t k = 0; k < coeffs.size(); ++k) {
    coeffs[k] = law.amplitudes[k] * rng.symmetric_unit();
    sq += coeffs[k] * coeffs[k];
  }
  const double sign = rng.sign();
  if (law.sigma == 0.0) return zero_function(grid);
  // Rescale only when the ball is exceeded; the +-1 sign keeps the
  // distribution exactly symmetric either way.
  double scale = sign;
  if (sq > law.sigma * law.sigma) scale *= law.sigma / std::sqrt(sq);
  for (double& value : coeffs) value *= scale;
  return decode(law.spec, coeffs, grid);
}

Dataset generate_dataset(const InputLaw& input_law, const OperatorSpec& op,
                         const NoiseLaw& noise_law, int n_pairs,
                         std::uint64_t seed, const GridPtr& grid) {
  if (n_pairs < 2) throw ConfigError("generate_dataset: need at least 2 pairs");
  Dataset dataset;
  dataset.grid = grid;
  dataset.meta.seed = seed;
  dataset.meta.operator_id = operator_id(op);
  dataset.meta.noise_sigma = noise_law.sigma;
  dataset.inputs.reserve(n_pairs);
  dataset.outputs.reserve(n_pairs);
  Rng rng(seed);
  for (int i = 0; i < n_pairs; ++i) {
    GridFunction u = sample_input(input_law, rng, grid);
    GridFunction noise = sample_noise(noise_law, rng, grid);
    GridFunction v = axpy(1.0, apply_operator(op, u), noise);
    dataset.inputs.push_back(std::move(u));
    dataset.outputs.push_back(std::move(v));
  }
  return dataset;
}

}  // namespace opres
