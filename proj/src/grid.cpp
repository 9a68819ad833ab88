#include "curvlab/grid.hpp"

namespace curvlab {

PolarGrid::PolarGrid(DomainSpec domain, int n_s, int n_t)
    : domain_(std::move(domain)), n_s_(n_s), n_t_(n_t) {
  if (n_s < 16 || n_t < 32) throw Error(ErrorCode::GridTooCoarse, "need n_s >= 16, n_t >= 32");
  if (n_t % 2 != 0) throw Error(ErrorCode::GridTooCoarse, "n_t must be even");
  rho_.resize(n_t_);
  rho1_.resize(n_t_);
  rho2_.resize(n_t_);
  for (int j = 0; j < n_t_; ++j) {
    rho_[j] = domain_.profile.value(t(j));
    rho1_[j] = domain_.profile.deriv(t(j));
    rho2_[j] = domain_.profile.second_deriv(t(j));
    if (rho_[j] <= 0.0) throw Error(ErrorCode::InvalidArgument, "profile not positive");
  }
  points_.resize(static_cast<size_t>(n_s_) * n_t_);
  jac_.resize(points_.size());
  chart_ok_.resize(points_.size());
  double max_theta = 0.0;
  for (int i = 1; i <= n_s_; ++i) {
    for (int j = 0; j < n_t_; ++j) {
      const size_t k = static_cast<size_t>(i - 1) * n_t_ + j;
      points_[k] = chart_from_polar(domain_.surface, domain_.pole, r(i, j), t(j));
      try {
        jac_[k] = polar_chart_jacobian(domain_.surface, domain_.pole, r(i, j), t(j));
        chart_ok_[k] = 1;
      } catch (const Error&) {
        jac_[k] = Matrix2d::Constant(std::numeric_limits<double>::quiet_NaN());
        chart_ok_[k] = 0;
      }
      max_theta = std::max(max_theta, theta(i, j));
    }
  }
  const double max_rho = domain_.profile.max_value();
  cell_size_ = std::max(max_rho * hs(), max_theta * ht());
}

const Matrix2d& PolarGrid::chart_jacobian(int i, int j) const {
  if (i == 0) throw Error(ErrorCode::InvalidArgument, "chart_jacobian undefined at the pole node");
  const size_t k = static_cast<size_t>(i - 1) * n_t_ + j;
  if (!chart_ok_[k])
    throw Error(ErrorCode::SingularChartPoint, "grid node inside the chart singular band");
  return jac_[k];
}

std::pair<double, double> PolarGrid::locate(const ChartPoint& q) const {
  const double d = geodesic_distance(domain_.surface, domain_.pole, q);
  if (d < 1e-13) return {0.0, 0.0};
  const PolarCoords pc = polar_from_chart(domain_.surface, domain_.pole, q);
  return {pc.r / domain_.profile.value(pc.t), pc.t};
}

ChartPoint PolarGrid::point_at(double s, double t) const {
  if (s == 0.0) return domain_.pole;
  return chart_from_polar(domain_.surface, domain_.pole, s * domain_.profile.value(t), t);
}

GridPtr make_grid(const DomainSpec& domain, int n_s, int n_t) {
  return std::make_shared<const PolarGrid>(domain, n_s, n_t);
}

ScalarField sample_field(GridPtr grid, const std::function<double(const ChartPoint&)>& f) {
  ScalarField u(grid);
  u.set_pole_value(f(grid->domain().pole));
  for (int i = 1; i <= grid->ns(); ++i)
    for (int j = 0; j < grid->nt(); ++j) u.values(i, j) = f(grid->point(i, j));
  return u;
}

Eigen::VectorXd interior_vector(const ScalarField& u) {
  const PolarGrid& g = *u.grid;
  Eigen::VectorXd x(g.num_interior());
  x[0] = u.pole_value();
  for (int i = 1; i < g.ns(); ++i)
    for (int j = 0; j < g.nt(); ++j) x[g.interior_index(i, j)] = u.values(i, j);
  return x;
}

Eigen::VectorXd boundary_vector(const ScalarField& u) {
  return u.values.row(u.grid->ns()).transpose();
}

ScalarField field_from_interior(GridPtr grid, const Eigen::VectorXd& xi) {
  ScalarField u(grid);
  u.set_pole_value(xi[0]);
  for (int i = 1; i < grid->ns(); ++i)
    for (int j = 0; j < grid->nt(); ++j) u.values(i, j) = xi[grid->interior_index(i, j)];
  return u;
}

FieldSampler::FieldSampler(const ScalarField& f) : grid_(f.grid) {
  const int ns = grid_->ns(), nt = grid_->nt();
  ext_.resize(ns + 3, nt);
  ext_.bottomRows(ns + 1) = f.values;
  // Rows at s = -h and s = -2h: the physical point on the opposite ray at the
  // same metric radius, obtained by cubic interpolation along column j+nt/2
  // at s' = s * rho(t_j) / rho(t_j + pi).
  for (int k = 1; k <= 2; ++k) {
    for (int j = 0; j < nt; ++j) {
      const int jo = (j + nt / 2) % nt;
      const double sp = k * grid_->hs() * grid_->rho(j) / grid_->rho(jo);
      // interpolate f.values(:, jo) at s = sp with a 4-point Lagrange stencil
      const double x = sp * ns;  // row coordinate in f.values
      int i0 = static_cast<int>(std::floor(x)) - 1;
      i0 = std::clamp(i0, 0, ns - 3);
      double acc = 0.0;
      for (int m = 0; m < 4; ++m) {
        double w = 1.0;
        for (int l = 0; l < 4; ++l)
          if (l != m) w *= (x - (i0 + l)) / (m - l);
        acc += w * f.values(i0 + m, jo);
      }
      ext_(2 - k, j) = acc;
    }
  }
}

double FieldSampler::operator()(double s, double t) const {
  const int ns = grid_->ns(), nt = grid_->nt();
  const double x = row_of_s(s);  // in [0, ns+2]
  const double y = t / grid_->ht();
  int i0 = static_cast<int>(std::floor(x)) - 1;
  i0 = std::clamp(i0, 0, ns - 1);  // rows i0..i0+3 of ext_
  const int j0 = static_cast<int>(std::floor(y)) - 1;
  double wx[4], wy[4];
  for (int m = 0; m < 4; ++m) {
    wx[m] = 1.0;
    wy[m] = 1.0;
    for (int l = 0; l < 4; ++l) {
      if (l == m) continue;
      wx[m] *= (x - (i0 + l)) / (m - l);
      wy[m] *= (y - (j0 + l)) / (m - l);
    }
  }
  double acc = 0.0;
  for (int m = 0; m < 4; ++m) {
    double row = 0.0;
    for (int l = 0; l < 4; ++l) {
      int j = (j0 + l) % nt;
      if (j < 0) j += nt;
      row += wy[l] * ext_(i0 + m, j);
    }
    acc += wx[m] * row;
  }
  return acc;
}

}  // namespace curvlab
