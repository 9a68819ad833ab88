#include "curvlab/pfunction.hpp"

namespace curvlab {

namespace {

// Directional value sampler about the pole: value at metric radius r along
// the frame direction with polar angle t.
double pole_ray_value(const PolarGrid& g, const FieldSampler& f, double r, double t) {
  if (r < 0) return pole_ray_value(g, f, -r, t + M_PI);
  const double tt = std::fmod(t, 2.0 * M_PI);
  return f(r / g.domain().profile.value(tt), tt);
}

}  // namespace

DerivativeFields derivative_fields(const ScalarField& u) {
  const PolarGrid& g = *u.grid;
  const int ns = g.ns(), nt = g.nt();
  const double hs = g.hs(), ht = g.ht();
  const Eigen::MatrixXd& v = u.values;

  DerivativeFields d;
  d.grid = u.grid;
  const int rows = ns + 1;
  for (Eigen::MatrixXd* m : {&d.u_r, &d.u_t, &d.grad_norm2, &d.hess_rr, &d.hess_rt, &d.hess_tt,
                             &d.laplacian, &d.gx, &d.gy})
    m->setZero(rows, nt);

  // Finite differences on the (s, t) rectangle; one-sided in s on the
  // boundary ring, periodic in t, row 0 is the pole value.
  Eigen::MatrixXd us(rows, nt), ut(rows, nt), uss(rows, nt), ust(rows, nt), utt(rows, nt);
  us.setZero();
  ut.setZero();
  uss.setZero();
  ust.setZero();
  utt.setZero();
  auto jm = [nt](int j) { return (j + nt - 1) % nt; };
  auto jp = [nt](int j) { return (j + 1) % nt; };
  for (int i = 1; i <= ns; ++i) {
    for (int j = 0; j < nt; ++j) {
      if (i < ns) {
        us(i, j) = (v(i + 1, j) - v(i - 1, j)) / (2 * hs);
        uss(i, j) = (v(i + 1, j) - 2 * v(i, j) + v(i - 1, j)) / (hs * hs);
      } else {
        us(i, j) = (3 * v(i, j) - 4 * v(i - 1, j) + v(i - 2, j)) / (2 * hs);
        uss(i, j) = (2 * v(i, j) - 5 * v(i - 1, j) + 4 * v(i - 2, j) - v(i - 3, j)) / (hs * hs);
      }
      ut(i, j) = (v(i, jp(j)) - v(i, jm(j))) / (2 * ht);
      utt(i, j) = (v(i, jp(j)) - 2 * v(i, j) + v(i, jm(j))) / (ht * ht);
    }
  }
  for (int i = 1; i <= ns; ++i)
    for (int j = 0; j < nt; ++j) ust(i, j) = (us(i, jp(j)) - us(i, jm(j))) / (2 * ht);

  const Curvature kappa = g.domain().surface.curvature;
  for (int i = 1; i <= ns; ++i) {
    for (int j = 0; j < nt; ++j) {
      const double s = g.s(i);
      const double rho = g.rho(j), rho1 = g.rho1(j), rho2 = g.rho2(j);
      const double a = 1.0 / rho;
      const double dadt = -rho1 / (rho * rho);
      const double b = -s * rho1 / rho;
      const double bs = -rho1 / rho;
      const double bt = -s * (rho2 / rho - rho1 * rho1 / (rho * rho));
      const double th = g.theta(i, j), th1 = g.theta1(i, j);

      const double ur = a * us(i, j);
      const double utp = ut(i, j) + b * us(i, j);
      const double urr = a * a * uss(i, j);
      const double urt = dadt * us(i, j) + a * (b * uss(i, j) + ust(i, j));
      const double uttr = (bs * b + bt) * us(i, j) + b * b * uss(i, j) + 2 * b * ust(i, j) +
                          utt(i, j);

      d.u_r(i, j) = ur;
      d.u_t(i, j) = utp;
      d.hess_rr(i, j) = urr;
      d.hess_rt(i, j) = urt - (th1 / th) * utp;
      d.hess_tt(i, j) = uttr + th * th1 * ur;
      d.laplacian(i, j) = d.hess_rr(i, j) + d.hess_tt(i, j) / (th * th);
      d.grad_norm2(i, j) = ur * ur + utp * utp / (th * th);
      if (g.chart_ok(i, j)) {
        const Vector2d chart = g.chart_jacobian(i, j) * Vector2d(ur, utp / (th * th));
        d.gx(i, j) = chart[0];
        d.gy(i, j) = chart[1];
      } else {
        d.gx(i, j) = d.gy(i, j) = std::numeric_limits<double>::quiet_NaN();
      }
    }
  }

  // Pole: geodesic point stencils on the interpolated field in the
  // chart-aligned orthonormal frame (normal-coordinate fallback).
  const FieldSampler f(u);
  const double delta = 1.5 * hs * g.domain().profile.min_value();
  const double u0 = u.pole_value();
  auto ray = [&](double r, double t) { return pole_ray_value(g, f, r, t); };
  Vector2d grad;
  Matrix2d hess;
  for (int a = 0; a < 2; ++a) {
    const double t = a * M_PI_2;
    grad[a] = (-ray(2 * delta, t) + 8 * ray(delta, t) - 8 * ray(-delta, t) + ray(-2 * delta, t)) /
              (12 * delta);
    hess(a, a) = (ray(delta, t) - 2 * u0 + ray(-delta, t)) / (delta * delta);
  }
  const double ddiag = (ray(delta, M_PI_4) - 2 * u0 + ray(-delta, M_PI_4)) / (delta * delta);
  hess(0, 1) = hess(1, 0) = ddiag - 0.5 * (hess(0, 0) + hess(1, 1));
  d.pole_grad_frame = grad;
  d.pole_hess_frame = hess;
  const Matrix2d F = frame_at(g.domain().surface, g.domain().pole);
  const Vector2d gchart = F * grad;
  d.gx.row(0).setConstant(gchart[0]);
  d.gy.row(0).setConstant(gchart[1]);
  d.grad_norm2.row(0).setConstant(grad.squaredNorm());
  d.laplacian.row(0).setConstant(hess.trace());
  return d;
}

PFunctionField build_p_function(const ScalarField& u, const Nonlinearity& nl,
                                const DerivativeFields& du) {
  const PolarGrid& g = *u.grid;
  const int ns = g.ns(), nt = g.nt();
  PFunctionField pf;
  pf.grid = u.grid;
  pf.P = ScalarField(u.grid);
  pf.dP_r.setZero(ns + 1, nt);
  pf.dP_t.setZero(ns + 1, nt);
  pf.px.setZero(ns + 1, nt);
  pf.py.setZero(ns + 1, nt);

  for (int i = 1; i <= ns; ++i)
    for (int j = 0; j < nt; ++j)
      pf.P.values(i, j) = 0.5 * du.grad_norm2(i, j) + nl.F(u.values(i, j));
  pf.P.set_pole_value(0.5 * du.grad_norm2(0, 0) + nl.F(u.pole_value()));

  for (int i = 1; i <= ns; ++i) {
    for (int j = 0; j < nt; ++j) {
      const double th = g.theta(i, j);
      const double gr = du.u_r(i, j);
      const double gt = du.u_t(i, j) / (th * th);  // contravariant t-component
      const double lap = du.laplacian(i, j);
      pf.dP_r(i, j) = du.hess_rr(i, j) * gr + du.hess_rt(i, j) * gt - lap * du.u_r(i, j);
      pf.dP_t(i, j) = du.hess_rt(i, j) * gr + du.hess_tt(i, j) * gt - lap * du.u_t(i, j);
      if (g.chart_ok(i, j)) {
        const Vector2d chart =
            g.chart_jacobian(i, j) * Vector2d(pf.dP_r(i, j), pf.dP_t(i, j) / (th * th));
        pf.px(i, j) = chart[0];
        pf.py(i, j) = chart[1];
      } else {
        pf.px(i, j) = pf.py(i, j) = std::numeric_limits<double>::quiet_NaN();
      }
    }
  }

  // Pole value of grad P from the frame quantities.
  const Vector2d gp = du.pole_hess_frame * du.pole_grad_frame -
                      du.pole_hess_frame.trace() * du.pole_grad_frame;
  pf.pole_grad_frame = gp;
  const Matrix2d F = frame_at(g.domain().surface, g.domain().pole);
  const Vector2d gchart = F * gp;
  pf.px.row(0).setConstant(gchart[0]);
  pf.py.row(0).setConstant(gchart[1]);

  // Two-route consistency: compare with plain finite differences of P.
  const DerivativeFields dP_fd = derivative_fields(pf.P);
  double scale = 0.0;
  for (int i = 1; i < ns; ++i)
    for (int j = 0; j < nt; ++j) {
      const double th = g.theta(i, j);
      scale = std::max(scale, std::sqrt(pf.dP_r(i, j) * pf.dP_r(i, j) +
                                        pf.dP_t(i, j) * pf.dP_t(i, j) / (th * th)));
    }
  double err = 0.0;
  for (int i = 1; i < ns; ++i)
    for (int j = 0; j < nt; ++j) {
      const double th = g.theta(i, j);
      const double er = dP_fd.u_r(i, j) - pf.dP_r(i, j);
      const double et = dP_fd.u_t(i, j) - pf.dP_t(i, j);
      err = std::max(err, std::sqrt(er * er + et * et / (th * th)));
    }
  pf.consistency_rel_error = scale > 0 ? err / scale : 0.0;
  return pf;
}

PFunctionField build_p_function(const ScalarField& u, const Nonlinearity& nl) {
  return build_p_function(u, nl, derivative_fields(u));
}

BoundaryIdentityReport boundary_identity_check(const PFunctionField& pf,
                                               const DerivativeFields& du, int samples) {
  const PolarGrid& g = *pf.grid;
  const int ns = g.ns(), nt = g.nt();
  // Per-node boundary data: <grad P, nu> and |grad u|^2.
  Eigen::VectorXd dpnu(nt), gn2(nt);
  for (int j = 0; j < nt; ++j) {
    const double th = g.theta(ns, j);
    const double rho1 = g.rho1(j);
    const double speed = std::hypot(rho1, th);
    const double nu_r = th / speed;
    const double nu_t = -rho1 / (th * speed);
    dpnu[j] = pf.dP_r(ns, j) * nu_r + pf.dP_t(ns, j) * nu_t;
    gn2[j] = du.grad_norm2(ns, j);
  }
  auto interp = [&](const Eigen::VectorXd& a, double t) {
    const double y = t / g.ht();
    const int j0 = static_cast<int>(std::floor(y)) - 1;
    double acc = 0.0;
    for (int m = 0; m < 4; ++m) {
      double w = 1.0;
      for (int l = 0; l < 4; ++l)
        if (l != m) w *= (y - (j0 + l)) / (m - l);
      acc += w * a[((j0 + m) % nt + nt) % nt];
    }
    return acc;
  };
  BoundaryIdentityReport rep;
  rep.samples = samples;
  double scale = 0.0;
  rep.max_dP_nu = -std::numeric_limits<double>::infinity();
  std::vector<double> lhs(samples), rhs(samples);
  for (int k = 0; k < samples; ++k) {
    const double t = 2.0 * M_PI * k / samples;
    lhs[k] = interp(dpnu, t);
    rhs[k] = -interp(gn2, t) * boundary_curvature(g.domain(), t);
    scale = std::max({scale, std::abs(lhs[k]), std::abs(rhs[k])});
    rep.max_dP_nu = std::max(rep.max_dP_nu, lhs[k]);
  }
  for (int k = 0; k < samples; ++k) {
    const double e = std::abs(lhs[k] - rhs[k]) / std::max(scale, 1e-300);
    if (e > rep.max_rel_error) {
      rep.max_rel_error = e;
      rep.worst_t = 2.0 * M_PI * k / samples;
    }
  }
  return rep;
}

}  // namespace curvlab
