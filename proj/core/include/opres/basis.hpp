#ifndef OPRES_BASIS_HPP
#define OPRES_BASIS_HPP

#include <span>
#include <string>
#include <vector>

#include "opres/quadrature.hpp"

namespace opres {

enum class BasisKind { legendre, trigonometric };

std::string to_string(BasisKind kind);

/// Deterministic tensor basis on [-1,1]^D.
///
/// Legendre: per-axis degrees k in {0..order-1}, d = order^D functions.
/// Trigonometric: per-axis indices k in {1..order} into the sequence
///   T_1 = 1/sqrt(2), T_{2k} = sin(k pi x), T_{2k+1} = cos(k pi x),
/// again d = order^D. Multi-indices are enumerated lexicographically.
struct BasisSpec {
  BasisKind kind = BasisKind::legendre;
  int dim = 1;    // D
  int order = 1;  // r, per-axis order

  int encode_dim() const;
  /// Smallest grid order accepted by encode(): r+1 for Legendre,
  /// 2r+2 for trigonometric.
  int min_grid_order() const;
  /// Multi-index of basis function k (0-based position), length dim.
  std::vector<int> multi_index(int k) const;
};

/// Normalized Legendre polynomial P_k(x) = sqrt((2k+1)/2) * Ptilde_k(x),
/// unit L2 norm on [-1,1]. Three-term recurrence on Ptilde.
double eval_legendre_1d(int degree, double x);

/// One-dimensional trigonometric function T_k, unit L2 norm on [-1,1].
/// The constant mode is 1/sqrt(2) (the unnormalized 1/2 would break
/// orthonormality).
double eval_trig_1d(int index, double x);

/// Value of basis function k at point x (length dim).
double eval_basis(const BasisSpec& spec, int k, std::span<const double> x);

/// Coefficients <u, phi_k> for all k, via quadrature on u's grid.
/// Throws ConfigError (naming the required order) when the grid is too
/// coarse for the exactness precondition.
std::vector<double> encode(const BasisSpec& spec, const GridFunction& u);

/// Pointwise evaluation of sum_k a_k phi_k on the given grid.
GridFunction decode(const BasisSpec& spec, std::span<const double> coeffs,
                    const GridPtr& grid);

/// decode(encode(u)) on u's grid.
GridFunction project(const BasisSpec& spec, const GridFunction& u);

/// || project(u) - u || in the grid norm.
double projection_error(const BasisSpec& spec, const GridFunction& u);

/// Per-axis table of 1-D basis values at the grid's axis nodes:
/// table[k][node] for k in 0..order-1. encode/decode build this once
/// so a full transform is O(d * m^D).
std::vector<std::vector<double>> axis_value_table(const BasisSpec& spec,
                                                  const QuadratureGrid& grid);

}  // namespace opres

#endif
