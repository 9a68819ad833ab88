#include "curvlab/auxiliary.hpp"

namespace curvlab {

SolvedProblem make_solved_problem(const LaplaceBeltrami& op, const ScalarField& u,
                                  const Nonlinearity& nl) {
  SolvedProblem sp;
  sp.grid = op.grid;
  sp.op = &op;
  sp.u = u;
  sp.nl = nl;
  sp.du = derivative_fields(u);
  sp.pf = build_p_function(u, nl, sp.du);
  return sp;
}

AuxiliaryField build_auxiliary(const SolvedProblem& sp, const ChartPoint& p, AuxiliaryKind kind) {
  const PolarGrid& g = *sp.grid;
  const ModelSurface surf = g.domain().surface;
  const double h = g.metric_cell_size();
  const FieldSampler usampler(sp.u);

  const double grad_scale = std::sqrt(sp.du.grad_norm2.maxCoeff());
  const Vector2d gp = grad_at(g, usampler, p, 1.5 * h);  // frame components
  const Matrix2d F = frame_at(surf, p);

  Vector2d v_frame;
  if (kind == AuxiliaryKind::Z) {
    if (gp.norm() < 1e-5 * grad_scale)
      throw Error(ErrorCode::NotApplicable, "Z-function needs grad u(p) != 0");
    v_frame = Vector2d(-gp[1], gp[0]).normalized();
  } else {
    if (gp.norm() > 1e-3 * grad_scale)
      throw Error(ErrorCode::NotApplicable, "W-function needs a critical base point");
    const Matrix2d H = hess_at(g, usampler, p, 1.5 * h);
    const Eigen::SelfAdjointEigenSolver<Matrix2d> es(H);
    // Direction of the smallest-|eigenvalue| eigenvector.
    const int which = std::abs(es.eigenvalues()[0]) <= std::abs(es.eigenvalues()[1]) ? 0 : 1;
    v_frame = es.eigenvectors().col(which);
  }
  const Vector2d v_chart = F * v_frame;

  AuxiliaryField aux;
  aux.kind = kind;
  aux.base_point = p;
  aux.killing = killing_for_geodesic(surf, p, v_chart);

  // Field values: <K, grad u> via the covector pairing in polar components.
  aux.values = ScalarField(sp.grid);
  for (int i = 1; i <= g.ns(); ++i) {
    for (int j = 0; j < g.nt(); ++j) {
      if (!g.chart_ok(i, j))
        throw Error(ErrorCode::SingularChartPoint,
                    "auxiliary field needs a chart-regular grid");
      const Vector2d kc = killing_value(aux.killing, g.point(i, j));
      const Vector2d kpolar = g.chart_jacobian(i, j).colPivHouseholderQr().solve(kc);
      aux.values.values(i, j) = kpolar[0] * sp.du.u_r(i, j) + kpolar[1] * sp.du.u_t(i, j);
    }
  }
  {
    const ChartPoint& pole = g.domain().pole;
    const Vector2d kc = killing_value(aux.killing, pole);
    const Matrix2d Fp = frame_at(surf, pole);
    const Vector2d k_frame = Fp.colPivHouseholderQr().solve(kc);
    aux.values.set_pole_value(k_frame.dot(sp.du.pole_grad_frame));
  }

  const double zsup = aux.values.max_abs();
  const FieldSampler zsampler(aux.values);
  const auto [ps, pt] = g.locate(p);
  aux.value_at_base = std::abs(zsampler(std::min(ps, 1.0), pt)) / std::max(zsup, 1e-300);

  // Interior residual of -Delta Z = f'(u) Z against the discrete operator.
  {
    const Eigen::VectorXd lhs = sp.op->neg_laplacian(aux.values);
    const Eigen::VectorXd ui = interior_vector(sp.u);
    const Eigen::VectorXd zi = interior_vector(aux.values);
    const Eigen::VectorXd rhs = ui.unaryExpr(sp.nl.fprime).cwiseProduct(zi);
    double scale = lhs.cwiseAbs().maxCoeff();
    scale = std::max(scale, rhs.cwiseAbs().maxCoeff());
    aux.pde_residual = (lhs - rhs).cwiseAbs().maxCoeff() / std::max(scale, 1e-300);
  }

  if (kind == AuxiliaryKind::Z) {
    // Lemma-style identities at the base point: grad P orthogonal to grad Z
    // and |grad P| = |grad u| |grad Z|.
    const FieldSampler psampler(sp.pf.P);
    const Vector2d gP = grad_at(g, psampler, p, 1.5 * h);
    const Vector2d gZ = grad_at(g, zsampler, p, 1.5 * h);
    const double np = gP.norm(), nz = gZ.norm(), nu = gp.norm();
    aux.identity_orthogonality = np * nz > 0 ? std::abs(gP.dot(gZ)) / (np * nz) : 0.0;
    aux.identity_norm_rel = np > 0 ? std::abs(np - nu * nz) / np : 0.0;
  }
  return aux;
}

namespace {

bool crossing_near(const NodalSet& nodal, const PolarGrid& g, const ChartPoint& p, double radius) {
  for (const auto& [s, t] : nodal.crossings) {
    const ChartPoint q = g.point_at(s, t);
    if (geodesic_distance(g.domain().surface, p, q) <= radius) return true;
  }
  return false;
}

}  // namespace

CoincidenceReport coincidence_audit(const SolvedProblem& sp,
                                    const std::vector<CriticalPointRecord>& u_records,
                                    const std::vector<CriticalPointRecord>& p_records) {
  const PolarGrid& g = *sp.grid;
  const ModelSurface surf = g.domain().surface;
  CoincidenceReport rep;
  rep.match_radius = 3.0 * g.metric_cell_size();

  std::vector<bool> u_used(u_records.size(), false);
  for (size_t bp = 0; bp < p_records.size(); ++bp) {
    double best = std::numeric_limits<double>::infinity();
    size_t best_u = u_records.size();
    for (size_t au = 0; au < u_records.size(); ++au) {
      if (u_used[au]) continue;
      const double d =
          geodesic_distance(surf, p_records[bp].location, u_records[au].location);
      if (d < best) {
        best = d;
        best_u = au;
      }
    }
    if (best_u < u_records.size() && best <= rep.match_radius) {
      u_used[best_u] = true;
      rep.matched.push_back({static_cast<int>(best_u), static_cast<int>(bp)});
    } else {
      CoincidenceMismatch mm;
      mm.record = p_records[bp];
      // The theorem predicts none of these; diagnose with a Z-function based
      // at the unmatched point when grad u does not vanish there.
      try {
        const AuxiliaryField z = build_auxiliary(sp, p_records[bp].location, AuxiliaryKind::Z);
        const NodalSet nodal = trace_nodal_set(z.values, std::sqrt(sp.du.grad_norm2.maxCoeff()));
        mm.z_boundary_zeros = nodal.boundary_zero_count;
        mm.z_crossing_near =
            crossing_near(nodal, g, p_records[bp].location, 3.0 * g.metric_cell_size());
      } catch (const Error&) {
        mm.z_boundary_zeros = -1;  // not applicable
      }
      rep.unmatched_p.push_back(std::move(mm));
    }
  }
  for (size_t au = 0; au < u_records.size(); ++au)
    if (!u_used[au]) rep.unmatched_u.push_back(u_records[au]);
  rep.coincide = rep.unmatched_p.empty() && rep.unmatched_u.empty();
  return rep;
}

NondegeneracyReport nondegeneracy_audit(const SolvedProblem& sp,
                                        const std::vector<CriticalPointRecord>& u_records) {
  NondegeneracyReport rep;
  rep.all_nondegenerate = true;
  for (const CriticalPointRecord& r : u_records) {
    NondegeneracyEntry e;
    e.record = r;
    e.degenerate = r.degeneracy_margin < kDegeneracyThreshold;
    if (e.degenerate) rep.all_nondegenerate = false;
    if (r.degeneracy_margin < 100.0 * kDegeneracyThreshold) {
      try {
        const AuxiliaryField w = build_auxiliary(sp, r.location, AuxiliaryKind::W);
        const NodalSet nodal = trace_nodal_set(w.values, std::sqrt(sp.du.grad_norm2.maxCoeff()));
        e.w_built = true;
        e.w_pde_residual = w.pde_residual;
        e.w_boundary_zeros = nodal.boundary_zero_count;
        e.w_crossing_near = crossing_near(nodal, *sp.grid, r.location,
                                          3.0 * sp.grid->metric_cell_size());
      } catch (const Error&) {
        e.w_built = false;
      }
    }
    rep.entries.push_back(std::move(e));
  }
  return rep;
}

}  // namespace curvlab
