#pragma once

#include <Eigen/Sparse>

#include "curvlab/grid.hpp"

namespace curvlab {

using SparseMatrix = Eigen::SparseMatrix<double>;

/// Discrete Laplace-Beltrami operator on the mapped (s, t) rectangle.
///
/// stiffness is the symmetric positive semidefinite energy matrix split into
/// interior x interior and interior x boundary blocks; weights is the lumped
/// Riemannian measure of the interior nodes. The operator
///   (-Delta_h u)_i = (A_ii u_int + A_ib u_bdy)_i / w_i
/// is self-adjoint in the weighted inner product <u, v>_w = sum w_i u_i v_i.
struct LaplaceBeltrami {
  GridPtr grid;
  SparseMatrix interior;          // A_ii
  SparseMatrix interior_boundary; // A_ib
  Eigen::VectorXd weights;        // interior lumped measure
  Eigen::VectorXd boundary_weights;

  /// -Delta_h applied to a full field (boundary values included), returned on
  /// interior DOFs.
  Eigen::VectorXd neg_laplacian(const ScalarField& u) const;

  double total_measure() const { return weights.sum() + boundary_weights.sum(); }
};

LaplaceBeltrami laplace_beltrami(GridPtr grid);

}  // namespace curvlab
