#include "curvlab/critical.hpp"

namespace curvlab {

const char* critical_kind_name(CriticalKind k) {
  switch (k) {
    case CriticalKind::Max: return "max";
    case CriticalKind::Min: return "min";
    case CriticalKind::Saddle: return "saddle";
    case CriticalKind::Degenerate: return "degenerate";
  }
  return "degenerate";
}

namespace {

ScalarField wrap_matrix(GridPtr grid, const Eigen::MatrixXd& m) {
  ScalarField f(grid);
  f.values = m;
  return f;
}

}  // namespace

VectorFieldSampler::VectorFieldSampler(GridPtr grid, const Eigen::MatrixXd& x,
                                       const Eigen::MatrixXd& y)
    : grid_(grid), fx_(wrap_matrix(grid, x)), fy_(wrap_matrix(grid, y)) {}

Vector2d VectorFieldSampler::at(const ChartPoint& q) const {
  const auto [s, t] = grid_->locate(q);
  if (s > 1.0 + 1e-9) throw Error(ErrorCode::InvalidArgument, "point outside grid");
  return at_grid_coords(std::min(s, 1.0), t);
}

int local_degree(const ModelSurface& s, const std::function<Vector2d(const ChartPoint&)>& field,
                 const ChartPoint& p, double radius, int samples) {
  if (radius <= 0) throw Error(ErrorCode::InvalidArgument, "local_degree: radius must be > 0");
  double scale = 0.0;
  std::vector<double> angles(samples);
  std::vector<double> mags(samples);
  for (int k = 0; k < samples; ++k) {
    const double phi = 2.0 * M_PI * k / samples;
    const ChartPoint q = chart_from_polar(s, p, radius, phi);
    const Vector2d v = field(q);
    angles[k] = std::atan2(v[1], v[0]);
    mags[k] = v.norm();
    scale = std::max(scale, mags[k]);
  }
  for (int k = 0; k < samples; ++k)
    if (mags[k] < 1e-9 * std::max(scale, 1e-300))
      throw Error(ErrorCode::ZeroOnCircle, "field nearly vanishes on the sampling circle");
  double total = 0.0;
  for (int k = 0; k < samples; ++k) {
    double d = angles[(k + 1) % samples] - angles[k];
    while (d > M_PI) d -= 2.0 * M_PI;
    while (d <= -M_PI) d += 2.0 * M_PI;
    total += d;
  }
  const double windings = total / (2.0 * M_PI);
  const double rounded = std::round(windings);
  if (std::abs(windings - rounded) > 1e-3) {
    if (samples < 2048) return local_degree(s, field, p, radius, samples * 4);
    throw Error(ErrorCode::SolverDiverged, "winding number did not settle to an integer");
  }
  return static_cast<int>(rounded);
}

int local_degree(const VectorFieldSampler& field, const ChartPoint& p, double radius,
                 int samples) {
  const ModelSurface s = field.grid()->domain().surface;
  return local_degree(
      s, [&](const ChartPoint& q) { return field.at(q); }, p, radius, samples);
}

namespace {

double sample_near(const PolarGrid& g, const FieldSampler& f, const ChartPoint& q) {
  const auto [s, t] = g.locate(q);
  return f(std::min(s, 1.0), t);
}

}  // namespace

Vector2d grad_at(const PolarGrid& g, const FieldSampler& f, const ChartPoint& q, double step) {
  const ModelSurface surf = g.domain().surface;
  Vector2d out;
  for (int a = 0; a < 2; ++a) {
    const double t = a * M_PI_2;
    const double p1 = sample_near(g, f, chart_from_polar(surf, q, step, t));
    const double m1 = sample_near(g, f, chart_from_polar(surf, q, step, t + M_PI));
    const double p2 = sample_near(g, f, chart_from_polar(surf, q, 2 * step, t));
    const double m2 = sample_near(g, f, chart_from_polar(surf, q, 2 * step, t + M_PI));
    out[a] = (-p2 + 8 * p1 - 8 * m1 + m2) / (12 * step);
  }
  return out;
}

Matrix2d hess_at(const PolarGrid& g, const FieldSampler& f, const ChartPoint& q, double step) {
  const ModelSurface surf = g.domain().surface;
  const double u0 = sample_near(g, f, q);
  Matrix2d h;
  auto second = [&](double t) {
    const double p1 = sample_near(g, f, chart_from_polar(surf, q, step, t));
    const double m1 = sample_near(g, f, chart_from_polar(surf, q, step, t + M_PI));
    return (p1 - 2 * u0 + m1) / (step * step);
  };
  h(0, 0) = second(0.0);
  h(1, 1) = second(M_PI_2);
  const double diag = second(M_PI_4);
  h(0, 1) = h(1, 0) = diag - 0.5 * (h(0, 0) + h(1, 1));
  return h;
}

namespace {

struct Candidate {
  double s, t;
};

bool sign_change(double a, double b, double c, double d) {
  const double mn = std::min({a, b, c, d});
  const double mx = std::max({a, b, c, d});
  return mn <= 0.0 && mx >= 0.0;
}

}  // namespace

std::vector<CriticalPointRecord> find_critical_points(const ScalarField& scalar,
                                                      const Eigen::MatrixXd& gx,
                                                      const Eigen::MatrixXd& gy,
                                                      FieldChoice which) {
  const PolarGrid& g = *scalar.grid;
  const ModelSurface surf = g.domain().surface;
  const int ns = g.ns(), nt = g.nt();
  const double h = g.metric_cell_size();
  const VectorFieldSampler grad(scalar.grid, gx, gy);
  const FieldSampler value(scalar);

  // Field scale for the refinement tolerance.
  double vscale = 0.0;
  for (int i = 1; i <= ns; ++i)
    for (int j = 0; j < nt; ++j) vscale = std::max(vscale, std::hypot(gx(i, j), gy(i, j)));
  if (vscale <= 0.0) throw Error(ErrorCode::InvalidArgument, "gradient field vanishes identically");

  // Cell screening: both chart components must change sign over the corners.
  std::vector<Candidate> cands;
  for (int i = 0; i <= ns - 2; ++i) {
    for (int j = 0; j < nt; ++j) {
      const int j1 = (j + 1) % nt;
      if (sign_change(gx(i, j), gx(i, j1), gx(i + 1, j), gx(i + 1, j1)) &&
          sign_change(gy(i, j), gy(i, j1), gy(i + 1, j), gy(i + 1, j1)))
        cands.push_back({(i + 0.5) * g.hs(), (j + 0.5) * g.ht()});
    }
  }

  struct Refined {
    ChartPoint q;
    double s, t;
    double grad_norm;
    bool ok;
  };
  std::vector<Refined> refined;
  const double fd_step = 0.35 * h;
  for (const Candidate& c : cands) {
    ChartPoint q = g.point_at(c.s, c.t);
    bool ok = false;
    for (int it = 0; it < 40; ++it) {
      Vector2d v;
      try {
        v = grad.at(q);
      } catch (const Error&) {
        break;  // wandered outside the grid
      }
      if (v.norm() <= 1e-9 * vscale) {
        ok = true;
        break;
      }
      // Jacobian of the chart components along the chart-aligned frame.
      const Matrix2d F = frame_at(surf, q);
      Matrix2d J;
      bool jac_ok = true;
      for (int a = 0; a < 2 && jac_ok; ++a) {
        try {
          const ChartPoint qp(surf, q.coords + fd_step * F.col(a));
          const ChartPoint qm(surf, q.coords - fd_step * F.col(a));
          J.col(a) = (grad.at(qp) - grad.at(qm)) / (2 * fd_step);
        } catch (const Error&) {
          jac_ok = false;
        }
      }
      if (!jac_ok || std::abs(J.determinant()) < 1e-30) break;
      // Newton step in frame coordinates, clipped to one cell.
      Vector2d step = J.colPivHouseholderQr().solve(-v);
      const double maxstep = 1.5 * h;
      if (step.norm() > maxstep) step *= maxstep / step.norm();
      q = ChartPoint(surf, q.coords + F * step);
      if (step.norm() < 1e-14) {
        ok = grad.at(q).norm() <= 1e-8 * vscale;
        break;
      }
    }
    double gn = std::numeric_limits<double>::infinity();
    auto [sq, tq] = std::pair<double, double>{c.s, c.t};
    try {
      std::tie(sq, tq) = g.locate(q);
      gn = grad.at(q).norm();
    } catch (const Error&) {
      ok = false;
      q = g.point_at(c.s, c.t);
      std::tie(sq, tq) = std::pair<double, double>{c.s, c.t};
    }
    if (ok && sq > 1.0 - 1e-9) continue;  // refined onto the boundary: not interior
    refined.push_back({q, sq, tq, gn, ok});
  }

  // Merge duplicates within radius 2h; prefer refined points with smaller
  // gradient norm.
  std::vector<Refined> merged;
  for (const Refined& r : refined) {
    bool absorbed = false;
    for (Refined& m : merged) {
      if (geodesic_distance(surf, r.q, m.q) < 2.0 * h) {
        if ((r.ok && !m.ok) || (r.ok == m.ok && r.grad_norm < m.grad_norm)) m = r;
        absorbed = true;
        break;
      }
    }
    if (!absorbed) merged.push_back(r);
  }

  std::vector<CriticalPointRecord> records;
  for (const Refined& m : merged) {
    CriticalPointRecord rec;
    rec.location = m.q;
    rec.s = m.s;
    rec.t = m.t;
    rec.which = which;
    rec.refined = m.ok;
    rec.grad_norm = m.grad_norm;
    rec.value = value(std::min(m.s, 1.0), m.t);
    rec.hessian = hess_at(g, value, m.q, 1.5 * h);
    rec.hessian_det = rec.hessian.determinant();
    const double fro2 = rec.hessian.squaredNorm();
    rec.degeneracy_margin = fro2 > 0 ? std::abs(rec.hessian_det) / fro2 : 0.0;
    if (!m.ok || rec.degeneracy_margin < kDegeneracyThreshold) {
      rec.classification = CriticalKind::Degenerate;
    } else {
      const Eigen::SelfAdjointEigenSolver<Matrix2d> es(rec.hessian);
      if (es.eigenvalues()[1] < 0)
        rec.classification = CriticalKind::Max;
      else if (es.eigenvalues()[0] > 0)
        rec.classification = CriticalKind::Min;
      else
        rec.classification = CriticalKind::Saddle;
    }
    records.push_back(rec);
  }

  // Local degrees, with radii kept away from other zeros and the boundary.
  for (size_t a = 0; a < records.size(); ++a) {
    double sep = std::numeric_limits<double>::infinity();
    for (size_t b = 0; b < records.size(); ++b)
      if (b != a)
        sep = std::min(sep, geodesic_distance(surf, records[a].location, records[b].location));
    const double rho_here = g.domain().profile.value(records[a].t);
    const double to_boundary = (1.0 - records[a].s) * rho_here;
    double radius = std::min(0.45 * sep, 0.5 * to_boundary);
    radius = std::min(std::max(radius, 1.5 * h), 0.9 * to_boundary);
    try {
      records[a].index = local_degree(grad, records[a].location, radius);
    } catch (const Error&) {
      records[a].index = 0;  // reported but unindexed (degenerate configurations)
    }
  }

  std::sort(records.begin(), records.end(),
            [](const CriticalPointRecord& a, const CriticalPointRecord& b) {
              return a.value > b.value;
            });
  return records;
}

std::vector<CriticalPointRecord> find_critical_points(const ScalarField& scalar,
                                                      const DerivativeFields& du) {
  return find_critical_points(scalar, du.gx, du.gy, FieldChoice::OfU);
}

std::vector<CriticalPointRecord> find_critical_points(const PFunctionField& pf) {
  return find_critical_points(pf.P, pf.px, pf.py, FieldChoice::OfP);
}

PoincareHopfReport poincare_hopf_audit(const PFunctionField& pf, const DerivativeFields& du,
                                       const std::vector<CriticalPointRecord>& p_records) {
  PoincareHopfReport rep;
  for (const CriticalPointRecord& r : p_records) rep.index_sum += r.index;
  const BoundaryIdentityReport b = boundary_identity_check(pf, du);
  rep.max_boundary_dP_nu = b.max_dP_nu;
  rep.boundary_sign_ok = b.max_dP_nu < 0.0;
  rep.chi = 1;
  rep.pass = rep.boundary_sign_ok && rep.index_sum == 1;
  return rep;
}

}  // namespace curvlab
