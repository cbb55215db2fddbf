#ifndef OPRES_QUADRATURE_HPP
#define OPRES_QUADRATURE_HPP

#include <cstddef>
#include <memory>
#include <utility>
#include <vector>

namespace opres {

/// Tensor-product Gauss-Legendre grid on [-1,1]^D.
///
/// The same m-point rule is used along every axis. Axis nodes are strictly
/// increasing and symmetric about 0; axis weights sum to 2. Tensor points
/// are enumerated lexicographically with axis 0 slowest, so point index
///   i = idx_0 * m^(D-1) + idx_1 * m^(D-2) + ... + idx_{D-1}.
/// Immutable after construction and safe to share across threads.
struct QuadratureGrid {
  int dim = 1;    // D
  int order = 1;  // m, nodes per axis
  std::vector<double> axis_nodes;
  std::vector<double> axis_weights;

  std::size_t point_count() const;
  /// Coordinates of tensor point i, length dim.
  std::vector<double> point(std::size_t i) const;
  /// Product of axis weights at tensor point i.
  double weight(std::size_t i) const;
};

using GridPtr = std::shared_ptr<const QuadratureGrid>;

/// Nodes and weights of the m-point Gauss-Legendre rule on [-1,1],
/// exact for polynomials of degree <= 2m-1. Roots of the degree-m
/// Legendre polynomial by Newton iteration on the three-term recurrence,
/// initialized from the Chebyshev-angle estimate; tolerance 1e-14.
std::pair<std::vector<double>, std::vector<double>> gauss_legendre_rule(int m);

GridPtr make_grid(int dim, int order);

/// Real-valued function on [-1,1]^D stored as values at the tensor grid
/// points, in the grid's lexicographic point order.
struct GridFunction {
  GridPtr grid;
  std::vector<double> values;
};

GridFunction zero_function(const GridPtr& grid);

/// Builds a GridFunction by evaluating f at every tensor point.
/// f receives the point coordinates as a const std::vector<double>&.
template <typename F>
GridFunction grid_sample(const GridPtr& grid, F&& f) {
  GridFunction out;
  out.grid = grid;
  const std::size_t count = grid->point_count();
  out.values.resize(count);
  for (std::size_t i = 0; i < count; ++i) out.values[i] = f(grid->point(i));
  return out;
}

/// L2([-1,1]^D) inner product by the tensor quadrature rule. Accumulation
/// is in lexicographic point order so results are bit-reproducible.
/// Throws DimensionError when f and g do not share a grid.
double inner_product(const GridFunction& f, const GridFunction& g);

double norm(const GridFunction& f);

/// alpha*f + g, pointwise.
GridFunction axpy(double alpha, const GridFunction& f, const GridFunction& g);

double distance(const GridFunction& f, const GridFunction& g);

}  // namespace opres

#endif
