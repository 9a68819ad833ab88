#pragma once

#include "curvlab/nonlinearity.hpp"
#include "curvlab/operators.hpp"

namespace curvlab {

struct SolveStats {
  int iterations = 0;
  double residual = 0.0;
  bool converged = false;
  std::string log;
};

/// Solution of -Delta u = 1, u = 0 on the boundary, by conjugate gradients
/// with diagonal preconditioning.
ScalarField solve_torsion(const LaplaceBeltrami& op, SolveStats* stats = nullptr);

struct EigenSolveResult {
  double lambda = 0.0;
  ScalarField eigenfunction;  // positive, sup-normalized
  SolveStats stats;
};

/// Smallest Dirichlet eigenpair by inverse power iteration (shift 0).
EigenSolveResult solve_first_eigen(const LaplaceBeltrami& op);

/// Damped Newton iteration on G(u) = -Delta u - f(u).
ScalarField solve_semilinear(const LaplaceBeltrami& op, const Nonlinearity& nl,
                             const ScalarField& u0, SolveStats* stats = nullptr);

struct StabilityReport {
  double lambda_min = 0.0;
  ScalarField eigenvector;
  bool semi_stable = false;
  double tolerance = 0.0;  // resolution-aware threshold on -lambda_min
  double residual = 0.0;
};

/// Bottom eigenvalue of the stability operator -Delta - f'(u) with Dirichlet
/// conditions, by inverse iteration shifted below the Gershgorin lower bound.
StabilityReport stability_spectrum(const LaplaceBeltrami& op, const Nonlinearity& nl,
                                   const ScalarField& u);

/// Convenience dispatcher: torsion and custom nonlinearities go through the
/// Newton solver, the eigen kind through solve_first_eigen (which also fixes
/// lambda in the returned nonlinearity).
struct SemilinearSolution {
  ScalarField u;
  Nonlinearity nl;
  double lambda = 0.0;  // set for the eigen kind
  SolveStats stats;
};

SemilinearSolution solve_problem(const LaplaceBeltrami& op, const Nonlinearity& nl);

}  // namespace curvlab
