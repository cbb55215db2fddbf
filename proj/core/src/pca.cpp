#include "opres/pca.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "opres/errors.hpp"

namespace opres {

namespace {

double off_diagonal_frobenius(const std::vector<double>& a, int n) {
  double acc = 0.0;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      if (i != j) acc += a[i * n + j] * a[i * n + j];
  return std::sqrt(acc);
}

double frobenius(const std::vector<double>& a, int n) {
  double acc = 0.0;
  for (int i = 0; i < n * n; ++i) acc += a[i] * a[i];
  return std::sqrt(acc);
}

}  // namespace

SymmetricEigen symmetric_eigen(std::span<const double> matrix, int n) {
  if (static_cast<int>(matrix.size()) != n * n)
    throw DimensionError("symmetric_eigen: matrix size != n*n");
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j)
      if (std::abs(matrix[i * n + j] - matrix[j * n + i]) > 1e-10)
        throw ConfigError("symmetric_eigen: input not symmetric within 1e-10");

  std::vector<double> a(matrix.begin(), matrix.end());
  std::vector<double> v(n * n, 0.0);
  for (int i = 0; i < n; ++i) v[i * n + i] = 1.0;

  const double scale = frobenius(a, n);
  const double target = scale > 0.0 ? 1e-12 * scale : 0.0;

  bool converged = n == 1 || off_diagonal_frobenius(a, n) <= target;
  for (int sweep = 0; sweep < 100 && !converged; ++sweep) {
    for (int p = 0; p < n - 1; ++p) {
      for (int q = p + 1; q < n; ++q) {
        const double apq = a[p * n + q];
        if (apq == 0.0) continue;
        const double app = a[p * n + p];
        const double aqq = a[q * n + q];
        // Classic stable rotation: tan via the smaller root.
        const double theta = (aqq - app) / (2.0 * apq);
        const double t = (theta >= 0.0 ? 1.0 : -1.0) /
                         (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        const double c = 1.0 / std::sqrt(t * t + 1.0);
        const double s = t * c;

        for (int k = 0; k < n; ++k) {
          const double akp = a[k * n + p];
          const double akq = a[k * n + q];
          a[k * n + p] = c * akp - s * akq;
          a[k * n + q] = s * akp + c * akq;
        }
        for (int k = 0; k < n; ++k) {
          const double apk = a[p * n + k];
          const double aqk = a[q * n + k];
          a[p * n + k] = c * apk - s * aqk;
          a[q * n + k] = s * apk + c * aqk;
        }
        for (int k = 0; k < n; ++k) {
          const double vkp = v[k * n + p];
          const double vkq = v[k * n + q];
          v[k * n + p] = c * vkp - s * vkq;
          v[k * n + q] = s * vkp + c * vkq;
        }
      }
    }
    converged = off_diagonal_frobenius(a, n) <= target;
  }
  if (!converged)
    throw InternalError("symmetric_eigen: Jacobi failed to converge in 100 sweeps");

  SymmetricEigen out;
  out.n = n;
  out.eigenvalues.resize(n);
  for (int i = 0; i < n; ++i) out.eigenvalues[i] = a[i * n + i];

  // Sort descending with a stable index permutation.
  std::vector<int> perm(n);
  std::iota(perm.begin(), perm.end(), 0);
  std::stable_sort(perm.begin(), perm.end(), [&](int lhs, int rhs) {
    return out.eigenvalues[lhs] > out.eigenvalues[rhs];
  });
  std::vector<double> sorted_values(n);
  std::vector<double> sorted_vectors(n * n);
  for (int k = 0; k < n; ++k) {
    sorted_values[k] = out.eigenvalues[perm[k]];
    for (int row = 0; row < n; ++row)
      sorted_vectors[row * n + k] = v[row * n + perm[k]];
  }
  out.eigenvalues = std::move(sorted_values);
  out.eigenvectors = std::move(sorted_vectors);
  return out;
}

PcaModel fit_pca(const SnapshotSet& snapshots, int d) {
  const int n = static_cast<int>(snapshots.functions.size());
  if (n < 1) throw ConfigError("fit_pca: empty snapshot set");
  if (d < 1) throw ConfigError("fit_pca: encode dimension must be >= 1");
  if (d > n)
    throw ConfigError("fit_pca: d = " + std::to_string(d) +
                      " exceeds snapshot count n = " + std::to_string(n));

  // Method of snapshots: K_ij = <u_i, u_j> / n shares its nonzero
  // spectrum with the empirical covariance operator.
  std::vector<double> gram(static_cast<std::size_t>(n) * n, 0.0);
  for (int i = 0; i < n; ++i) {
    for (int j = i; j < n; ++j) {
      const double value =
          inner_product(snapshots.functions[i], snapshots.functions[j]) / n;
      gram[i * n + j] = value;
      gram[j * n + i] = value;
    }
  }

  SymmetricEigen eig = symmetric_eigen(gram, n);

  int effective_rank = 0;
  for (int k = 0; k < n; ++k) {
    if (eig.eigenvalues[k] < -1e-8)
      throw InternalError("fit_pca: Gram eigenvalue " +
                          std::to_string(eig.eigenvalues[k]) + " below -1e-8");
    if (eig.eigenvalues[k] > 1e-12) ++effective_rank;
  }
  if (effective_rank < d)
    throw RankDeficiencyError(
        "fit_pca: requested d = " + std::to_string(d) +
            " but snapshot rank is " + std::to_string(effective_rank),
        effective_rank);

  PcaModel model;
  model.encode_dim = d;
  model.eigenvalues.resize(d + 1);
  for (int k = 0; k <= d; ++k)
    model.eigenvalues[k] = k < n ? std::max(0.0, eig.eigenvalues[k]) : 0.0;
  model.spectral_gap = model.eigenvalues[d - 1] - model.eigenvalues[d];
  model.trailing_energy = 0.0;
  for (int k = d; k < n; ++k)
    model.trailing_energy += std::max(0.0, eig.eigenvalues[k]);

  const GridPtr grid = snapshots.functions.front().grid;
  model.eigenfunctions.reserve(d);
  for (int k = 0; k < d; ++k) {
    GridFunction phi = zero_function(grid);
    for (int i = 0; i < n; ++i) {
      const double c = eig.vector_entry(i, k);
      for (std::size_t p = 0; p < phi.values.size(); ++p)
        phi.values[p] += c * snapshots.functions[i].values[p];
    }
    const double len = norm(phi);
    if (len <= 0.0)
      throw InternalError("fit_pca: zero-norm eigenfunction at k = " +
                          std::to_string(k));
    for (double& value : phi.values) value /= len;

    // Deterministic sign: the grid value with the largest magnitude is
    // positive; first index wins on exact ties.
    double peak = 0.0;
    for (double value : phi.values)
      if (std::abs(value) > std::abs(peak)) peak = value;
    if (peak < 0.0)
      for (double& value : phi.values) value = -value;

    model.eigenfunctions.push_back(std::move(phi));
  }
  return model;
}

std::vector<double> pca_encode(const PcaModel& model, const GridFunction& u) {
  std::vector<double> coeffs(model.encode_dim);
  for (int k = 0; k < model.encode_dim; ++k)
    coeffs[k] = inner_product(u, model.eigenfunctions[k]);
  return coeffs;
}

GridFunction pca_decode(const PcaModel& model, std::span<const double> coeffs,
                        const GridPtr& grid) {
  if (static_cast<int>(coeffs.size()) != model.encode_dim)
    throw DimensionError("pca_decode: coefficient count mismatch");
  GridFunction out = zero_function(grid);
  for (int k = 0; k < model.encode_dim; ++k) {
    const GridFunction& phi = model.eigenfunctions[k];
    if (phi.values.size() != out.values.size())
      throw DimensionError("pca_decode: grid mismatch with model eigenfunctions");
    for (std::size_t p = 0; p < out.values.size(); ++p)
      out.values[p] += coeffs[k] * phi.values[p];
  }
  return out;
}

GridFunction pca_project(const PcaModel& model, const GridFunction& u) {
  return pca_decode(model, pca_encode(model, u), u.grid);
}

}  // namespace opres
