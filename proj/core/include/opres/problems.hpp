#ifndef OPRES_PROBLEMS_HPP
#define OPRES_PROBLEMS_HPP

#include <cstdint>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "opres/basis.hpp"
#include "opres/quadrature.hpp"
#include "opres/rng.hpp"
#include "opres/train.hpp"

namespace opres {

/// Small library of bounded-Lipschitz scalar maps R^k -> R used by the
/// multi-index operators and the manifold input law. Each entry knows
/// its Lipschitz constant and sup-norm on a coordinate box.
enum class ScalarFnKind {
  sine_sum,         // sin(z_1 + ... + z_k)
  cosine_sum,       // cos(z_1 + ... + z_k)
  quad_plus_linear, // z_1^2 + z_2 (z_2 dropped when k = 1)
  linear_sum,       // z_1 + ... + z_k
};

struct ScalarFn {
  ScalarFnKind kind = ScalarFnKind::sine_sum;

  double eval(std::span<const double> z) const;
  /// Lipschitz constant w.r.t. the euclidean norm on {|z_i| <= radius}.
  double lipschitz(int arity, double radius) const;
  /// sup |g| on the same box.
  double max_abs(int arity, double radius) const;
};

ScalarFn scalar_fn_from_name(const std::string& name);
std::string to_string(ScalarFnKind kind);

/// Heat semigroup on the periodic span {sin(k pi x), cos(k pi x)}_{k<=cap}:
/// the frequency-k coefficient pair is damped by exp(-(k pi)^2 t). The
/// span deliberately excludes the constant mode, which the semigroup
/// would leave untouched; inputs must live inside the span.
struct HeatSemigroupOp {
  double t = 0.0;
  int mode_cap = 1;
};

/// Circular shift u(x) -> u(x - s) on the same periodic span; the
/// frequency-k pair rotates by angle k pi s.
struct ShiftOp {
  double shift = 0.0;
  int mode_cap = 1;
};

/// Operator whose k-th output coefficient is g_k(V_k^T a_u) where a_u
/// holds the first d_x trigonometric coefficients of the input:
/// Psi(u) = sum_k g_k(V_k^T a_u) T_k. Output lives in span{T_1..T_dy}.
struct MultiIndexTrigOp {
  int d_x = 1;
  int d_y = 1;
  int d0 = 1;
  std::vector<std::vector<double>> projections;  // d_y matrices, d_x x d0 row-major
  std::vector<ScalarFn> links;                   // d_y scalar maps
  std::vector<double> link_lipschitz;            // stored constants per head
};

using OperatorSpec = std::variant<HeatSemigroupOp, ShiftOp, MultiIndexTrigOp>;

/// Seeded multi-index fixture: random unit-column projections, one named
/// link per head; Lipschitz constants recorded for the given input radius.
MultiIndexTrigOp make_multi_index_op(int d_x, int d_y, int d0,
                                     const std::vector<ScalarFn>& links,
                                     double input_radius, std::uint64_t seed);

std::string operator_id(const OperatorSpec& op);

/// One-dimensional trig span the operator acts within (heat/shift) or
/// writes into (multi-index outputs).
BasisSpec operator_output_span(const OperatorSpec& op);

/// Input samples u = sum_k a_k phi_k with a_k = amplitude_k * xi_k and
/// xi_k i.i.d. uniform on [-1,1]; every draw satisfies
/// ||u|| <= sqrt(sum amplitude_k^2).
struct CoefficientDecayLaw {
  BasisSpec spec;
  std::vector<double> amplitudes;  // one per basis function; zeros allowed
};

/// a_k = amplitude * k^-beta over all d basis functions (k is the 1-based
/// enumeration position).
CoefficientDecayLaw make_decay_law(const BasisSpec& spec, double amplitude,
                                   double beta);

/// Same decay but only over the operator's periodic span, so samples are
/// valid heat/shift inputs (no constant mode, no out-of-span energy).
CoefficientDecayLaw make_operator_span_decay_law(const OperatorSpec& op,
                                                 double amplitude, double beta);

/// Trig coefficients on a d0-dimensional manifold: a_1..a_{d0} uniform in
/// [-box, box], a_k = g_k(a_1..a_{d0}) for k > d0.
struct ManifoldLaw {
  int d0 = 1;
  double box_halfwidth = 1.0;
  std::vector<ScalarFn> maps;  // size d_x - d0
  BasisSpec spec;              // trig, dim 1, order d_x
};

using InputLaw = std::variant<CoefficientDecayLaw, ManifoldLaw>;

GridFunction sample_input(const InputLaw& law, Rng& rng, const GridPtr& grid);

/// Guaranteed bound on ||u|| over the law's support (Assumption-style
/// compactness radius R).
double law_radius(const InputLaw& law);

std::string input_law_id(const InputLaw& law);

/// Applies the ground-truth operator. Heat/shift inputs with more than
/// 1e-8 squared norm outside the periodic span raise a numeric error.
GridFunction apply_operator(const OperatorSpec& op, const GridFunction& u);

/// Analytic Lipschitz bound: exp(-pi^2 t) for heat, 1 for shift, and
/// sqrt(sum_k L_{g_k}^2 ||V_k||_op^2) for multi-index with the operator
/// norms obtained by power iteration.
double operator_lipschitz_constant(const OperatorSpec& op);

/// Bound on ||Psi(u)|| over inputs with ||u|| <= input_radius.
double operator_output_radius(const OperatorSpec& op, double input_radius);

/// Bounded symmetric noise in a trig span: per-component uniform draws,
/// rescaled into the ball of radius sigma when exceeded (the default
/// amplitudes sigma/sqrt(#modes) never exceed it), then a global +-1 sign.
struct NoiseLaw {
  double sigma = 0.0;
  BasisSpec spec;
  std::vector<double> amplitudes;
};

/// Noise spread uniformly over the operator's output span.
NoiseLaw make_noise_law(const OperatorSpec& op, double sigma);

GridFunction sample_noise(const NoiseLaw& law, Rng& rng, const GridPtr& grid);

/// n_pairs i.i.d. pairs (u_i, Psi(u_i) + eps_i) from one seeded stream.
Dataset generate_dataset(const InputLaw& input_law, const OperatorSpec& op,
                         const NoiseLaw& noise_law, int n_pairs,
                         std::uint64_t seed, const GridPtr& grid);

}  // namespace opres

#endif
