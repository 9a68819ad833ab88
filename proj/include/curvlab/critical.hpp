#pragma once

#include "curvlab/pfunction.hpp"

namespace curvlab {

enum class CriticalKind { Max, Min, Saddle, Degenerate };
enum class FieldChoice { OfU, OfP };

const char* critical_kind_name(CriticalKind k);

/// Scale-invariant degeneracy threshold: a critical point counts as
/// degenerate when |det D2| < kDegeneracyThreshold * ||D2||_F^2.
inline constexpr double kDegeneracyThreshold = 1e-6;

struct CriticalPointRecord {
  ChartPoint location;
  double s = 0.0, t = 0.0;  // grid coordinates of the refined point
  FieldChoice which = FieldChoice::OfU;
  double value = 0.0;
  double grad_norm = 0.0;
  Matrix2d hessian = Matrix2d::Zero();  // orthonormal-frame components
  double hessian_det = 0.0;
  double degeneracy_margin = 0.0;  // |det| / ||D2||_F^2
  CriticalKind classification = CriticalKind::Degenerate;
  int index = 0;  // local degree of the gradient field
  bool refined = false;
};

/// Chart-component samplers of a vector field given on the grid.
class VectorFieldSampler {
 public:
  VectorFieldSampler(GridPtr grid, const Eigen::MatrixXd& x, const Eigen::MatrixXd& y);

  Vector2d at_grid_coords(double s, double t) const { return {fx_(s, t), fy_(s, t)}; }
  Vector2d at(const ChartPoint& q) const;
  GridPtr grid() const { return grid_; }

 private:
  GridPtr grid_;
  FieldSampler fx_, fy_;
};

/// Winding number of the field around p on the metric circle of the given
/// radius (256 samples by default). Throws ZeroOnCircle when the field almost
/// vanishes on the circle.
int local_degree(const ModelSurface& s, const std::function<Vector2d(const ChartPoint&)>& field,
                 const ChartPoint& p, double radius, int samples = 256);

int local_degree(const VectorFieldSampler& field, const ChartPoint& p, double radius,
                 int samples = 256);

/// Gradient and Hessian of an interpolated scalar field at an arbitrary point,
/// in the orthonormal chart-aligned frame, via geodesic difference stencils.
Vector2d grad_at(const PolarGrid& g, const FieldSampler& f, const ChartPoint& q, double step);
Matrix2d hess_at(const PolarGrid& g, const FieldSampler& f, const ChartPoint& q, double step);

/// Locates all interior critical points of the scalar field whose gradient
/// chart components are given by (gx, gy): cell-wise sign-change screening,
/// Newton refinement on the interpolated field, duplicate merging within
/// twice the metric cell size. Records are sorted by decreasing value.
std::vector<CriticalPointRecord> find_critical_points(const ScalarField& scalar,
                                                      const Eigen::MatrixXd& gx,
                                                      const Eigen::MatrixXd& gy,
                                                      FieldChoice which);

std::vector<CriticalPointRecord> find_critical_points(const ScalarField& scalar,
                                                      const DerivativeFields& du);
std::vector<CriticalPointRecord> find_critical_points(const PFunctionField& pf);

struct PoincareHopfReport {
  int index_sum = 0;
  bool boundary_sign_ok = false;
  double max_boundary_dP_nu = 0.0;
  int chi = 1;
  bool pass = false;
};

/// Sum of local degrees of grad P over the located critical points plus the
/// boundary sign condition <grad P, nu> < 0.
PoincareHopfReport poincare_hopf_audit(const PFunctionField& pf, const DerivativeFields& du,
                                       const std::vector<CriticalPointRecord>& p_records);

}  // namespace curvlab
