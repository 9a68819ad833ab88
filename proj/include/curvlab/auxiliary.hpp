#pragma once

#include "curvlab/critical.hpp"
#include "curvlab/nodal.hpp"
#include "curvlab/solve.hpp"

namespace curvlab {

enum class AuxiliaryKind { Z, W };

/// An auxiliary function K(u) = <K, grad u> built from a Killing field K whose
/// geodesic integral curve passes through the base point: Z-kind with K(p)
/// orthogonal to grad u(p), W-kind with K(p) along a Hessian null direction at
/// a critical point p. Both satisfy -Delta K(u) = f'(u) K(u).
struct AuxiliaryField {
  AuxiliaryKind kind = AuxiliaryKind::Z;
  ChartPoint base_point;
  KillingField killing;
  ScalarField values;
  double value_at_base = 0.0;     // |Z(p)| relative to its own sup
  double pde_residual = 0.0;      // relative interior residual of -Delta Z = f'(u) Z
  double identity_orthogonality = 0.0;  // |<grad P, grad Z>| / (|grad P| |grad Z|)  (Z-kind)
  double identity_norm_rel = 0.0;       // ||grad P| - |grad u||grad Z|| / |grad P|  (Z-kind)
};

/// Bundle of everything the audits need about one solved problem.
struct SolvedProblem {
  GridPtr grid;
  const LaplaceBeltrami* op = nullptr;
  ScalarField u;
  Nonlinearity nl;
  DerivativeFields du;
  PFunctionField pf;
};

SolvedProblem make_solved_problem(const LaplaceBeltrami& op, const ScalarField& u,
                                  const Nonlinearity& nl);

AuxiliaryField build_auxiliary(const SolvedProblem& sp, const ChartPoint& p, AuxiliaryKind kind);

struct CoincidenceMismatch {
  CriticalPointRecord record;
  int z_boundary_zeros = 0;
  bool z_crossing_near = false;
};

struct CoincidenceReport {
  std::vector<std::pair<int, int>> matched;  // (index into u-records, index into P-records)
  std::vector<CriticalPointRecord> unmatched_u;
  std::vector<CoincidenceMismatch> unmatched_p;
  double match_radius = 0.0;
  bool coincide = false;
};

/// Nearest-neighbour matching (within 3 metric cells) of the critical points
/// of u and P. For each unmatched P-point a Z-function is built there and its
/// boundary-zero count and nodal-crossing diagnostic recorded.
CoincidenceReport coincidence_audit(const SolvedProblem& sp,
                                    const std::vector<CriticalPointRecord>& u_records,
                                    const std::vector<CriticalPointRecord>& p_records);

struct NondegeneracyEntry {
  CriticalPointRecord record;
  bool degenerate = false;
  bool w_built = false;
  double w_pde_residual = 0.0;
  int w_boundary_zeros = 0;
  bool w_crossing_near = false;
};

struct NondegeneracyReport {
  std::vector<NondegeneracyEntry> entries;
  bool all_nondegenerate = false;
};

/// Degeneracy margins |det D2u| / ||D2u||_F^2 per critical point; for
/// near-degenerate points a W-kind auxiliary is built and its diagnostics
/// recorded.
NondegeneracyReport nondegeneracy_audit(const SolvedProblem& sp,
                                        const std::vector<CriticalPointRecord>& u_records);

}  // namespace curvlab
