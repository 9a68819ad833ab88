#pragma once

#include "curvlab/nonlinearity.hpp"
#include "curvlab/operators.hpp"

namespace curvlab {

/// First and second covariant derivatives of a scalar field, per node, in the
/// geodesic polar coordinates (r, t) about the domain pole, together with the
/// gradient vector in chart components. Rows 1..n_s hold ring nodes (one-sided
/// stencils on the boundary ring); the pole carries chart-frame values
/// obtained from geodesic point stencils.
struct DerivativeFields {
  GridPtr grid;
  Eigen::MatrixXd u_r, u_t;                    // gradient covector, polar components
  Eigen::MatrixXd grad_norm2;                  // |grad u|^2 (all rows incl. pole)
  Eigen::MatrixXd hess_rr, hess_rt, hess_tt;   // covariant Hessian
  Eigen::MatrixXd laplacian;
  Eigen::MatrixXd gx, gy;                      // gradient vector, chart components
  Vector2d pole_grad_frame = Vector2d::Zero(); // orthonormal-frame components
  Matrix2d pole_hess_frame = Matrix2d::Zero();
};

DerivativeFields derivative_fields(const ScalarField& u);

/// The P-function P = |grad u|^2 / 2 + F(u) with its gradient computed both
/// covariantly (grad P = nabla_{grad u} grad u - (Delta u) grad u, using the
/// analytic Christoffel symbols of the polar chart) and by differencing the
/// P values; the maximal interior discrepancy is kept as a consistency
/// diagnostic.
struct PFunctionField {
  GridPtr grid;
  ScalarField P;
  Eigen::MatrixXd dP_r, dP_t;  // covariant route, covector components
  Eigen::MatrixXd px, py;      // grad P vector, chart components
  Vector2d pole_grad_frame = Vector2d::Zero();
  double consistency_rel_error = 0.0;
};

PFunctionField build_p_function(const ScalarField& u, const Nonlinearity& nl,
                                const DerivativeFields& du);
PFunctionField build_p_function(const ScalarField& u, const Nonlinearity& nl);

struct BoundaryIdentityReport {
  double max_rel_error = 0.0;
  double worst_t = 0.0;
  int samples = 0;
  double max_dP_nu = 0.0;  // max over samples of <grad P, nu> (negative when the
                           // boundary sign condition holds)
};

/// Pointwise check of <grad P, nu> = -|grad u|^2 kappa on boundary samples;
/// errors are relative to the maximal magnitude of the two sides.
BoundaryIdentityReport boundary_identity_check(const PFunctionField& pf,
                                               const DerivativeFields& du, int samples = 512);

}  // namespace curvlab
