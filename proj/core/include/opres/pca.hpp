#ifndef OPRES_PCA_HPP
#define OPRES_PCA_HPP

#include <span>
#include <vector>

#include "opres/quadrature.hpp"

namespace opres {

/// Eigenvalues (descending) and orthonormal eigenvectors of a symmetric
/// matrix. eigenvectors is row-major n x n with eigenvector k stored as
/// column k.
struct SymmetricEigen {
  std::vector<double> eigenvalues;
  std::vector<double> eigenvectors;
  int n = 0;

  double vector_entry(int row, int k) const { return eigenvectors[row * n + k]; }
};

/// Cyclic Jacobi rotations until the off-diagonal Frobenius norm drops
/// below 1e-12 * ||A||_F (at most 100 sweeps). Input is row-major n x n
/// and must be symmetric within 1e-10, otherwise a precondition error
/// is thrown.
SymmetricEigen symmetric_eigen(std::span<const double> matrix, int n);

struct SnapshotSet {
  std::vector<GridFunction> functions;
};

/// Empirical-covariance eigensystem fitted by the method of snapshots.
/// eigenvalues holds d+1 entries (the extra one feeds the spectral gap);
/// eigenfunctions are orthonormal in the grid inner product.
struct PcaModel {
  int encode_dim = 0;
  std::vector<double> eigenvalues;       // d+1, non-increasing, clamped at 0
  std::vector<GridFunction> eigenfunctions;  // d
  double spectral_gap = 0.0;             // lambda_d - lambda_{d+1}
  double trailing_energy = 0.0;          // sum_{k>d} lambda_k
};

/// Fits the top-d eigenpairs of the empirical covariance (1/n) sum u_i ox u_i
/// via the n x n Gram matrix K_ij = <u_i,u_j>/n. Eigenfunctions are
/// normalized to unit norm and re-signed so the grid value of largest
/// magnitude is positive (deterministic under eigenvalue ties).
/// Throws on d > n and on rank deficiency (fewer than d eigenvalues
/// above 1e-12).
PcaModel fit_pca(const SnapshotSet& snapshots, int d);

std::vector<double> pca_encode(const PcaModel& model, const GridFunction& u);
GridFunction pca_decode(const PcaModel& model, std::span<const double> coeffs,
                        const GridPtr& grid);
GridFunction pca_project(const PcaModel& model, const GridFunction& u);

}  // namespace opres

#endif
