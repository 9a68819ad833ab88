#include "curvlab/solve.hpp"

#include <Eigen/IterativeLinearSolvers>
#include <Eigen/SparseCholesky>
#include <sstream>

namespace curvlab {

namespace {

using CG = Eigen::ConjugateGradient<SparseMatrix, Eigen::Lower | Eigen::Upper,
                                    Eigen::DiagonalPreconditioner<double>>;

Eigen::VectorXd cg_solve(const SparseMatrix& A, const Eigen::VectorXd& b, double rel_tol,
                         const Eigen::VectorXd* guess, bool* ok = nullptr, int* iters = nullptr) {
  CG cg;
  cg.setTolerance(rel_tol);
  cg.setMaxIterations(20000);
  cg.compute(A);
  Eigen::VectorXd x = guess ? cg.solveWithGuess(b, *guess) : cg.solve(b).eval();
  const double resid = (A * x - b).norm() / std::max(b.norm(), 1e-300);
  if (ok) *ok = resid <= 10.0 * rel_tol;
  if (iters) *iters = static_cast<int>(cg.iterations());
  return x;
}

SparseMatrix with_diagonal_shift(const SparseMatrix& A, const Eigen::VectorXd& d) {
  SparseMatrix out = A;
  for (int i = 0; i < d.size(); ++i) out.coeffRef(i, i) += d[i];
  return out;
}

double weighted_norm(const Eigen::VectorXd& x, const Eigen::VectorXd& w) {
  return std::sqrt(x.cwiseProduct(w).dot(x));
}

struct GershgorinBounds {
  double lower, upper;
};

// Row bounds of the generalized pencil (L, W) with diagonal positive W.
GershgorinBounds gershgorin(const SparseMatrix& L, const Eigen::VectorXd& w) {
  GershgorinBounds b{std::numeric_limits<double>::infinity(),
                     -std::numeric_limits<double>::infinity()};
  for (int k = 0; k < L.outerSize(); ++k) {
    double diag = 0.0, offsum = 0.0;
    for (SparseMatrix::InnerIterator it(L, k); it; ++it) {
      if (it.row() == it.col())
        diag = it.value();
      else
        offsum += std::abs(it.value());
    }
    b.lower = std::min(b.lower, (diag - offsum) / w[k]);
    b.upper = std::max(b.upper, (diag + offsum) / w[k]);
  }
  return b;
}

struct InverseIterationResult {
  double lambda = 0.0;
  Eigen::VectorXd v;
  double residual = 0.0;
  int iterations = 0;
  bool converged = false;
};

// Smallest eigenvalue of L v = lambda W v by inverse power iteration on
// (L - shift W), which must be positive definite.
InverseIterationResult smallest_eigenpair(const SparseMatrix& L, const Eigen::VectorXd& w,
                                          double shift, double rel_tol) {
  InverseIterationResult res;
  const SparseMatrix B = with_diagonal_shift(L, -shift * w);
  Eigen::VectorXd v = Eigen::VectorXd::Ones(w.size());
  v /= weighted_norm(v, w);
  const GershgorinBounds gb = gershgorin(L, w);
  const double scale = std::max(std::abs(gb.upper), std::abs(gb.lower));
  Eigen::VectorXd y = v;
  for (int it = 1; it <= 400; ++it) {
    const Eigen::VectorXd rhs = w.cwiseProduct(v);
    const double cg_tol = it < 3 ? 1e-8 : 1e-12;
    y = cg_solve(B, rhs, cg_tol, &y);
    y /= weighted_norm(y, w);
    const double lambda = y.dot(L * y) / y.dot(w.cwiseProduct(y));
    const Eigen::VectorXd r = L * y - lambda * w.cwiseProduct(y);
    const double resid = std::sqrt(r.cwiseQuotient(w).dot(r));  // W^{-1/2} norm
    res.lambda = lambda;
    res.residual = resid;
    res.iterations = it;
    v = y;
    if (resid <= rel_tol * std::max(std::abs(lambda), 1e-10 * scale)) {
      res.converged = true;
      break;
    }
  }
  res.v = v;
  return res;
}

ScalarField normalized_field(GridPtr grid, Eigen::VectorXd x) {
  // Flip sign so the sup-node is positive, then normalize sup to 1.
  Eigen::Index imax;
  x.cwiseAbs().maxCoeff(&imax);
  if (x[imax] < 0) x = -x;
  x /= x[imax];
  return field_from_interior(grid, x);
}

}  // namespace

ScalarField solve_torsion(const LaplaceBeltrami& op, SolveStats* stats) {
  bool ok = false;
  int iters = 0;
  const Eigen::VectorXd x = cg_solve(op.interior, op.weights, 1e-12, nullptr, &ok, &iters);
  const double resid = (op.interior * x - op.weights).norm() / op.weights.norm();
  if (!ok || resid > 1e-10)
    throw Error(ErrorCode::SolverDiverged, "torsion CG residual " + std::to_string(resid));
  if (stats) {
    stats->iterations = iters;
    stats->residual = resid;
    stats->converged = true;
    std::ostringstream log;
    log << "cg iterations " << iters << ", relative residual " << resid;
    stats->log = log.str();
  }
  return field_from_interior(op.grid, x);
}

EigenSolveResult solve_first_eigen(const LaplaceBeltrami& op) {
  const InverseIterationResult r = smallest_eigenpair(op.interior, op.weights, 0.0, 1e-8);
  if (!r.converged)
    throw Error(ErrorCode::SolverDiverged, "inverse power iteration did not converge");
  EigenSolveResult out;
  out.lambda = r.lambda;
  out.eigenfunction = normalized_field(op.grid, r.v);
  out.stats.iterations = r.iterations;
  out.stats.residual = r.residual;
  out.stats.converged = true;
  return out;
}

ScalarField solve_semilinear(const LaplaceBeltrami& op, const Nonlinearity& nl,
                             const ScalarField& u0, SolveStats* stats) {
  nl.validate();
  if (!u0.values.allFinite()) throw Error(ErrorCode::InvalidArgument, "u0 not finite");
  Eigen::VectorXd u = interior_vector(u0);
  const auto residual_vec = [&](const Eigen::VectorXd& x) -> Eigen::VectorXd {
    return op.interior * x - op.weights.cwiseProduct(x.unaryExpr(nl.f));
  };
  std::ostringstream log;
  double res_inf = residual_vec(u).cwiseQuotient(op.weights).cwiseAbs().maxCoeff();
  const double tol = 1e-9;
  int it = 0;
  for (; it < 50 && res_inf > tol; ++it) {
    const Eigen::VectorXd g = residual_vec(u);
    const SparseMatrix J =
        with_diagonal_shift(op.interior, -op.weights.cwiseProduct(u.unaryExpr(nl.fprime)));
    bool cg_ok = false;
    Eigen::VectorXd delta = cg_solve(J, -g, 1e-12, nullptr, &cg_ok);
    if (!cg_ok) {
      // Jacobian not safely positive definite for CG; factorize instead.
      Eigen::SimplicialLDLT<SparseMatrix> ldlt(J);
      if (ldlt.info() != Eigen::Success)
        throw Error(ErrorCode::NewtonStalled,
                    "singular Newton system, residual " + std::to_string(res_inf));
      delta = ldlt.solve(-g);
      if (!delta.allFinite())
        throw Error(ErrorCode::NewtonStalled,
                    "singular Newton system, residual " + std::to_string(res_inf));
    }
    double step = 1.0;
    double new_res = 0.0;
    Eigen::VectorXd u_new;
    for (int halving = 0; halving <= 6; ++halving) {
      u_new = u + step * delta;
      new_res = residual_vec(u_new).cwiseQuotient(op.weights).cwiseAbs().maxCoeff();
      if (new_res < res_inf || new_res <= tol) break;
      step *= 0.5;
    }
    if (new_res >= res_inf && new_res > tol)
      throw Error(ErrorCode::NewtonStalled, "residual stalled at " + std::to_string(new_res));
    u = u_new;
    res_inf = new_res;
    log << "newton " << it + 1 << ": residual " << res_inf << ", step " << step << "\n";
  }
  if (res_inf > tol)
    throw Error(ErrorCode::NewtonStalled, "residual " + std::to_string(res_inf) + " after 50 its");
  if (stats) {
    stats->iterations = it;
    stats->residual = res_inf;
    stats->converged = true;
    stats->log = log.str();
  }
  const double sup = u.cwiseAbs().maxCoeff();
  if (sup < 1e-12 && nl.f(0.0) == 0.0) return field_from_interior(op.grid, u);
  if (u.minCoeff() <= 0.0)
    throw Error(ErrorCode::NonPositiveSolution, "converged solution is not positive");
  return field_from_interior(op.grid, u);
}

StabilityReport stability_spectrum(const LaplaceBeltrami& op, const Nonlinearity& nl,
                                   const ScalarField& u) {
  const Eigen::VectorXd ui = interior_vector(u);
  const SparseMatrix L =
      with_diagonal_shift(op.interior, -op.weights.cwiseProduct(ui.unaryExpr(nl.fprime)));
  const GershgorinBounds gb = gershgorin(L, op.weights);
  const double shift = gb.lower - 0.01 * std::max(1.0, std::abs(gb.lower));
  const InverseIterationResult r = smallest_eigenpair(L, op.weights, shift, 1e-8);
  if (!r.converged)
    throw Error(ErrorCode::SolverDiverged, "stability inverse iteration did not converge");
  StabilityReport rep;
  rep.lambda_min = r.lambda;
  rep.eigenvector = normalized_field(op.grid, r.v);
  rep.tolerance = 1e-6 * std::max(std::abs(gb.upper), std::abs(gb.lower));
  rep.semi_stable = r.lambda >= -rep.tolerance;
  rep.residual = r.residual;
  return rep;
}

SemilinearSolution solve_problem(const LaplaceBeltrami& op, const Nonlinearity& nl) {
  SemilinearSolution sol;
  switch (nl.kind) {
    case NonlinearityKind::Torsion:
      sol.u = solve_torsion(op, &sol.stats);
      sol.nl = nl;
      break;
    case NonlinearityKind::Eigen: {
      EigenSolveResult r = solve_first_eigen(op);
      sol.u = r.eigenfunction;
      sol.lambda = r.lambda;
      sol.nl = Nonlinearity::eigen(r.lambda);
      sol.stats = r.stats;
      break;
    }
    case NonlinearityKind::Custom: {
      ScalarField u0(op.grid);
      sol.u = solve_semilinear(op, nl, u0, &sol.stats);
      sol.nl = nl;
      break;
    }
  }
  return sol;
}

}  // namespace curvlab
