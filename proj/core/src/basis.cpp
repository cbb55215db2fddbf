#include "opres/basis.hpp"

#include <cmath>

#include "opres/errors.hpp"

namespace opres {

namespace {
constexpr double kPi = 3.14159265358979323846;
constexpr double kInvSqrt2 = 0.70710678118654752440;
}  // namespace

std::string to_string(BasisKind kind) {
  return kind == BasisKind::legendre ? "legendre" : "trig";
}

int BasisSpec::encode_dim() const {
  int d = 1;
  for (int j = 0; j < dim; ++j) d *= order;
  return d;
}

int BasisSpec::min_grid_order() const {
  return kind == BasisKind::legendre ? order + 1 : 2 * order + 2;
}

std::vector<int> BasisSpec::multi_index(int k) const {
  std::vector<int> idx(dim);
  const int base = kind == BasisKind::legendre ? 0 : 1;  // trig starts at 1
  for (int j = dim - 1; j >= 0; --j) {
    idx[j] = base + (k % order);
    k /= order;
  }
  return idx;
}

double eval_legendre_1d(int degree, double x) {
  double p_prev = 1.0;
  double p = x;
  if (degree == 0) p = 1.0;
  for (int k = 1; k < degree; ++k) {
    const double p_next = ((2 * k + 1) * x * p - k * p_prev) / (k + 1);
    p_prev = p;
    p = p_next;
  }
  return std::sqrt((2.0 * degree + 1.0) / 2.0) * p;
}

double eval_trig_1d(int index, double x) {
  if (index < 1) throw ConfigError("eval_trig_1d: index must be >= 1");
  if (index == 1) return kInvSqrt2;
  const int freq = index / 2;
  return (index % 2 == 0) ? std::sin(freq * kPi * x) : std::cos(freq * kPi * x);
}

double eval_basis(const BasisSpec& spec, int k, std::span<const double> x) {
  if (static_cast<int>(x.size()) != spec.dim)
    throw DimensionError("eval_basis: point dimension mismatch");
  const std::vector<int> idx = spec.multi_index(k);
  double value = 1.0;
  for (int j = 0; j < spec.dim; ++j) {
    value *= spec.kind == BasisKind::legendre ? eval_legendre_1d(idx[j], x[j])
                                              : eval_trig_1d(idx[j], x[j]);
  }
  return value;
}

std::vector<std::vector<double>> axis_value_table(const BasisSpec& spec,
                                                  const QuadratureGrid& grid) {
  std::vector<std::vector<double>> table(spec.order);
  const int base = spec.kind == BasisKind::legendre ? 0 : 1;
  for (int k = 0; k < spec.order; ++k) {
    table[k].resize(grid.order);
    for (int node = 0; node < grid.order; ++node) {
      const double x = grid.axis_nodes[node];
      table[k][node] = spec.kind == BasisKind::legendre
                           ? eval_legendre_1d(base + k, x)
                           : eval_trig_1d(base + k, x);
    }
  }
  return table;
}

namespace {

void require_grid_order(const BasisSpec& spec, const QuadratureGrid& grid,
                        const char* op) {
  if (grid.dim != spec.dim)
    throw DimensionError(std::string(op) + ": grid dimension " +
                         std::to_string(grid.dim) + " != basis dimension " +
                         std::to_string(spec.dim));
  if (grid.order < spec.min_grid_order())
    throw ConfigError(std::string(op) + ": grid order " +
                      std::to_string(grid.order) + " too coarse for " +
                      to_string(spec.kind) + " order " +
                      std::to_string(spec.order) + "; need m >= " +
                      std::to_string(spec.min_grid_order()));
}

// Walks tensor points in lexicographic order, tracking per-axis node
// indices without divisions.
struct LexCounter {
  explicit LexCounter(int dim, int order) : idx(dim, 0), order(order) {}
  void advance() {
    for (int j = static_cast<int>(idx.size()) - 1; j >= 0; --j) {
      if (++idx[j] < order) return;
      idx[j] = 0;
    }
  }
  std::vector<int> idx;
  int order;
};

}  // namespace

std::vector<double> encode(const BasisSpec& spec, const GridFunction& u) {
  require_grid_order(spec, *u.grid, "encode");
  const QuadratureGrid& grid = *u.grid;
  const int d = spec.encode_dim();
  const std::size_t count = grid.point_count();
  const auto table = axis_value_table(spec, grid);

  std::vector<double> coeffs(d, 0.0);
  for (int k = 0; k < d; ++k) {
    std::vector<int> kidx(spec.dim);
    int rem = k;
    for (int j = spec.dim - 1; j >= 0; --j) {
      kidx[j] = rem % spec.order;
      rem /= spec.order;
    }
    double acc = 0.0;
    LexCounter cursor(grid.dim, grid.order);
    for (std::size_t i = 0; i < count; ++i, cursor.advance()) {
      double phi_w = 1.0;
      for (int j = 0; j < grid.dim; ++j)
        phi_w *= table[kidx[j]][cursor.idx[j]] * grid.axis_weights[cursor.idx[j]];
      acc += u.values[i] * phi_w;
    }
    coeffs[k] = acc;
  }
  return coeffs;
}

GridFunction decode(const BasisSpec& spec, std::span<const double> coeffs,
                    const GridPtr& grid) {
  if (static_cast<int>(coeffs.size()) != spec.encode_dim())
    throw DimensionError("decode: coefficient count " +
                         std::to_string(coeffs.size()) + " != encode_dim " +
                         std::to_string(spec.encode_dim()));
  if (grid->dim != spec.dim)
    throw DimensionError("decode: grid dimension mismatch");

  const auto table = axis_value_table(spec, *grid);
  GridFunction out = zero_function(grid);
  const std::size_t count = grid->point_count();
  for (int k = 0; k < spec.encode_dim(); ++k) {
    if (coeffs[k] == 0.0) continue;
    std::vector<int> kidx(spec.dim);
    int rem = k;
    for (int j = spec.dim - 1; j >= 0; --j) {
      kidx[j] = rem % spec.order;
      rem /= spec.order;
    }
    LexCounter cursor(grid->dim, grid->order);
    for (std::size_t i = 0; i < count; ++i, cursor.advance()) {
      double phi = 1.0;
      for (int j = 0; j < grid->dim; ++j) phi *= table[kidx[j]][cursor.idx[j]];
      out.values[i] += coeffs[k] * phi;
    }
  }
  return out;
}

GridFunction project(const BasisSpec& spec, const GridFunction& u) {
  return decode(spec, encode(spec, u), u.grid);
}

double projection_error(const BasisSpec& spec, const GridFunction& u) {
  return distance(project(spec, u), u);
}

}  // namespace opres
