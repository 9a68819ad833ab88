#pragma once

#include <memory>

#include "curvlab/domain.hpp"

namespace curvlab {

/// Boundary-fitted polar grid: nodes at (s_i, t_j) with s_i = i/n_s,
/// t_j = 2 pi j / n_t, mapped to the surface by r = s * rho(t) about the
/// domain pole. Ring i = 0 degenerates to the single pole node; ring i = n_s
/// lies exactly on the boundary.
class PolarGrid {
 public:
  PolarGrid(DomainSpec domain, int n_s, int n_t);

  const DomainSpec& domain() const { return domain_; }
  int ns() const { return n_s_; }
  int nt() const { return n_t_; }
  double hs() const { return 1.0 / n_s_; }
  double ht() const { return 2.0 * M_PI / n_t_; }

  double s(int i) const { return static_cast<double>(i) / n_s_; }
  double t(int j) const { return 2.0 * M_PI * j / n_t_; }

  double rho(int j) const { return rho_[j]; }
  double rho1(int j) const { return rho1_[j]; }
  double rho2(int j) const { return rho2_[j]; }
  double r(int i, int j) const { return s(i) * rho_[j]; }
  double theta(int i, int j) const { return warp(domain_.surface.curvature, r(i, j)); }
  double theta1(int i, int j) const { return warp_deriv(domain_.surface.curvature, r(i, j)); }

  /// Chart point of node (i, j); i = 0 returns the pole for any j.
  const ChartPoint& point(int i, int j) const {
    return i == 0 ? domain_.pole : points_[(i - 1) * n_t_ + j];
  }

  /// Jacobian d(chart)/d(r,t) at node (i, j), i >= 1. Nodes inside the
  /// spherical chart's singular band have no chart frame.
  const Matrix2d& chart_jacobian(int i, int j) const;
  bool chart_ok(int i, int j) const { return i == 0 || chart_ok_[(i - 1) * n_t_ + j]; }

  // Interior degrees of freedom: the pole (index 0) followed by rings
  // 1..n_s-1; the boundary ring is not a DOF.
  int num_interior() const { return 1 + (n_s_ - 1) * n_t_; }
  int num_boundary() const { return n_t_; }
  int interior_index(int i, int j) const { return i == 0 ? 0 : 1 + (i - 1) * n_t_ + j; }

  /// Coarse metric cell size (used for merge radii and tolerances).
  double metric_cell_size() const { return cell_size_; }

  /// (s, t) coordinates of an arbitrary chart point; s may exceed 1 for
  /// points outside the domain.
  std::pair<double, double> locate(const ChartPoint& q) const;

  ChartPoint point_at(double s, double t) const;

 private:
  DomainSpec domain_;
  int n_s_, n_t_;
  std::vector<double> rho_, rho1_, rho2_;
  std::vector<ChartPoint> points_;
  std::vector<Matrix2d> jac_;
  std::vector<char> chart_ok_;
  double cell_size_ = 0.0;
};

using GridPtr = std::shared_ptr<const PolarGrid>;

GridPtr make_grid(const DomainSpec& domain, int n_s, int n_t);

/// Node samples of a scalar function. values(i, j) holds node (i, j); row 0
/// stores the pole value replicated across all j.
struct ScalarField {
  GridPtr grid;
  Eigen::MatrixXd values;  // (n_s + 1) x n_t

  ScalarField() = default;
  explicit ScalarField(GridPtr g)
      : grid(std::move(g)), values(Eigen::MatrixXd::Zero(grid->ns() + 1, grid->nt())) {}

  double pole_value() const { return values(0, 0); }
  void set_pole_value(double v) { values.row(0).setConstant(v); }

  double max_abs() const { return values.cwiseAbs().maxCoeff(); }
};

/// Samples a function of the chart point over the grid.
ScalarField sample_field(GridPtr grid, const std::function<double(const ChartPoint&)>& f);

Eigen::VectorXd interior_vector(const ScalarField& u);
Eigen::VectorXd boundary_vector(const ScalarField& u);
ScalarField field_from_interior(GridPtr grid, const Eigen::VectorXd& xi);

/// C^0 bicubic (4-point Lagrange) interpolation of a scalar field in (s, t),
/// periodic in t and continued smoothly across the pole by radial mirroring.
class FieldSampler {
 public:
  explicit FieldSampler(const ScalarField& f);

  double operator()(double s, double t) const;
  bool inside(double s) const { return s >= -0.5 / grid_->ns() && s <= 1.0; }

 private:
  GridPtr grid_;
  Eigen::MatrixXd ext_;  // rows: s = -2h, -h, 0, h, ..., 1
  double row_of_s(double s) const { return s * grid_->ns() + 2.0; }
};

}  // namespace curvlab
