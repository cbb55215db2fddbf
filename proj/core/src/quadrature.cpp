#include "opres/quadrature.hpp"

#include <cmath>
#include <cstdint>

#include "opres/errors.hpp"

namespace opres {

namespace {

// Unnormalized Legendre polynomial and derivative at x via the
// three-term recurrence (k+1)P_{k+1} = (2k+1)x P_k - k P_{k-1}.
void legendre_and_derivative(int m, double x, double& value, double& deriv) {
  double p_prev = 1.0;  // P_0
  double p = x;         // P_1
  for (int k = 1; k < m; ++k) {
    const double p_next = ((2 * k + 1) * x * p - k * p_prev) / (k + 1);
    p_prev = p;
    p = p_next;
  }
  value = p;
  deriv = m * (x * p - p_prev) / (x * x - 1.0);
}

}  // namespace

std::pair<std::vector<double>, std::vector<double>> gauss_legendre_rule(int m) {
  if (m < 1) throw ConfigError("gauss_legendre_rule: order must be >= 1");
  std::vector<double> nodes(m), weights(m);
  if (m == 1) {
    nodes[0] = 0.0;
    weights[0] = 2.0;
    return {nodes, weights};
  }

  const double pi = 3.14159265358979323846;
  const int half = (m + 1) / 2;
  for (int i = 0; i < half; ++i) {
    // Chebyshev-angle estimate of the i-th root, then Newton.
    // Roots come in symmetric pairs; solve one half and mirror so
    // symmetry about 0 is exact in floating point.
    double z = std::cos(pi * (i + 0.75) / (m + 0.5));
    double value = 0.0, deriv = 1.0;
    bool converged = false;
    for (int iter = 0; iter < 100; ++iter) {
      legendre_and_derivative(m, z, value, deriv);
      const double step = value / deriv;
      z -= step;
      if (std::abs(step) <= 1e-14) {
        converged = true;
        break;
      }
    }
    if (!converged)
      throw InternalError("gauss_legendre_rule: Newton failed to converge");
    legendre_and_derivative(m, z, value, deriv);
    const double w = 2.0 / ((1.0 - z * z) * deriv * deriv);
    // z is the (i-th largest) positive-side root.
    nodes[m - 1 - i] = z;
    nodes[i] = -z;
    weights[m - 1 - i] = w;
    weights[i] = w;
  }
  if (m % 2 == 1) nodes[m / 2] = 0.0;  // center node is exactly 0
  return {nodes, weights};
}

std::size_t QuadratureGrid::point_count() const {
  std::size_t count = 1;
  for (int j = 0; j < dim; ++j) count *= static_cast<std::size_t>(order);
  return count;
}

std::vector<double> QuadratureGrid::point(std::size_t i) const {
  std::vector<double> x(dim);
  const std::size_t m = static_cast<std::size_t>(order);
  for (int j = dim - 1; j >= 0; --j) {
    x[j] = axis_nodes[i % m];
    i /= m;
  }
  return x;
}

double QuadratureGrid::weight(std::size_t i) const {
  double w = 1.0;
  const std::size_t m = static_cast<std::size_t>(order);
  for (int j = dim - 1; j >= 0; --j) {
    w *= axis_weights[i % m];
    i /= m;
  }
  return w;
}

GridPtr make_grid(int dim, int order) {
  if (dim < 1) throw ConfigError("make_grid: dim must be >= 1");
  auto grid = std::make_shared<QuadratureGrid>();
  grid->dim = dim;
  grid->order = order;
  auto [nodes, weights] = gauss_legendre_rule(order);
  grid->axis_nodes = std::move(nodes);
  grid->axis_weights = std::move(weights);
  return grid;
}

GridFunction zero_function(const GridPtr& grid) {
  GridFunction f;
  f.grid = grid;
  f.values.assign(grid->point_count(), 0.0);
  return f;
}

namespace {

void require_shared_grid(const GridFunction& f, const GridFunction& g,
                         const char* op) {
  if (!f.grid || !g.grid)
    throw DimensionError(std::string(op) + ": grid function without a grid");
  if (f.grid == g.grid) return;
  // Distinct grid objects are accepted when structurally identical.
  if (f.grid->dim != g.grid->dim || f.grid->order != g.grid->order)
    throw DimensionError(std::string(op) + ": mismatched grids (D=" +
                         std::to_string(f.grid->dim) + ",m=" +
                         std::to_string(f.grid->order) + " vs D=" +
                         std::to_string(g.grid->dim) + ",m=" +
                         std::to_string(g.grid->order) + ")");
}

}  // namespace

double inner_product(const GridFunction& f, const GridFunction& g) {
  require_shared_grid(f, g, "inner_product");
  const QuadratureGrid& grid = *f.grid;
  const std::size_t count = grid.point_count();
  if (f.values.size() != count || g.values.size() != count)
    throw DimensionError("inner_product: value array does not match grid size");

  if (grid.dim == 1) {
    double acc = 0.0;
    for (std::size_t i = 0; i < count; ++i)
      acc += f.values[i] * g.values[i] * grid.axis_weights[i];
    return acc;
  }
  double acc = 0.0;
  for (std::size_t i = 0; i < count; ++i)
    acc += f.values[i] * g.values[i] * grid.weight(i);
  return acc;
}

double norm(const GridFunction& f) {
  const double sq = inner_product(f, f);
  return sq > 0.0 ? std::sqrt(sq) : 0.0;
}

GridFunction axpy(double alpha, const GridFunction& f, const GridFunction& g) {
  require_shared_grid(f, g, "axpy");
  GridFunction out;
  out.grid = f.grid;
  out.values.resize(f.values.size());
  for (std::size_t i = 0; i < f.values.size(); ++i)
    out.values[i] = alpha * f.values[i] + g.values[i];
  return out;
}

double distance(const GridFunction& f, const GridFunction& g) {
  return norm(axpy(-1.0, g, f));
}

}  // namespace opres
