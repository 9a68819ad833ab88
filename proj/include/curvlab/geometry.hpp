#pragma once

#include <Eigen/Dense>
#include <array>
#include <cmath>

#include "curvlab/error.hpp"

namespace curvlab {

using Eigen::Matrix2d;
using Eigen::Vector2d;
using Eigen::Vector3d;

enum class Curvature : int { Hyperbolic = -1, Flat = 0, Sphere = +1 };

/// Warp factor of the geodesic polar metric dr^2 + warp(r)^2 dt^2:
/// sin, id, sinh for curvature +1, 0, -1.
template <typename Scalar>
Scalar warp(Curvature k, Scalar r) {
  switch (k) {
    case Curvature::Sphere:
      return std::sin(r);
    case Curvature::Flat:
      return r;
    case Curvature::Hyperbolic:
      return std::sinh(r);
  }
  return r;
}

template <typename Scalar>
Scalar warp_deriv(Curvature k, Scalar r) {
  switch (k) {
    case Curvature::Sphere:
      return std::cos(r);
    case Curvature::Flat:
      return Scalar(1);
    case Curvature::Hyperbolic:
      return std::cosh(r);
  }
  return Scalar(1);
}

/// One of the three model geometries in its canonical chart:
/// R^2 Cartesian, S^2 spherical (theta, phi), H^2 Poincare disk.
struct ModelSurface {
  Curvature curvature = Curvature::Flat;

  static ModelSurface R2() { return {Curvature::Flat}; }
  static ModelSurface S2() { return {Curvature::Sphere}; }
  static ModelSurface H2() { return {Curvature::Hyperbolic}; }

  const char* name() const {
    switch (curvature) {
      case Curvature::Sphere:
        return "S2";
      case Curvature::Flat:
        return "R2";
      case Curvature::Hyperbolic:
        return "H2";
    }
    return "R2";
  }

  bool operator==(const ModelSurface& o) const { return curvature == o.curvature; }
};

ModelSurface surface_from_name(const std::string& name);

/// Half-width of the band around the spherical chart poles (theta in {0, pi})
/// inside which chart-frame components are unreliable.
inline constexpr double kSingularBand = 1e-3;

/// A point in the canonical chart. For S2 the coords are (theta, phi); for H2
/// a Poincare-disk point with x^2+y^2 < 1; for R2 Cartesian.
struct ChartPoint {
  Vector2d coords = Vector2d::Zero();
  bool pole_adjacent = false;

  ChartPoint() = default;
  ChartPoint(const ModelSurface& s, double a, double b) : coords(a, b) {
    if (s.curvature == Curvature::Sphere)
      pole_adjacent = coords[0] < kSingularBand || coords[0] > M_PI - kSingularBand;
  }
  ChartPoint(const ModelSurface& s, const Vector2d& c) : ChartPoint(s, c[0], c[1]) {}

  double x() const { return coords[0]; }
  double y() const { return coords[1]; }
};

struct TangentVector {
  ChartPoint base;
  Vector2d components = Vector2d::Zero();
};

struct PolarCoords {
  double r = 0.0;
  double t = 0.0;
};

/// A Killing field expressed in the canonical basis of the surface:
/// K = c1 K1 + c2 K2 + c3 K3.
struct KillingField {
  ModelSurface surface;
  Vector3d basis_coeffs = Vector3d::Zero();
};

// -- metric and connection --------------------------------------------------

/// Metric components in the chart frame. Throws SingularChartPoint inside the
/// spherical singular band.
Matrix2d metric_at(const ModelSurface& s, const ChartPoint& p);

/// Christoffel symbols Gamma^k_{ij}; element [k](i,j).
std::array<Matrix2d, 2> christoffel_at(const ModelSurface& s, const ChartPoint& p);

inline double inner(const Matrix2d& g, const Vector2d& a, const Vector2d& b) {
  return a.dot(g * b);
}

double norm(const ModelSurface& s, const TangentVector& v);

/// Orthonormal frame (e1, e2) at p, chart-aligned and positively oriented,
/// as columns of the returned matrix.
Matrix2d frame_at(const ModelSurface& s, const ChartPoint& p);

// -- Killing fields ----------------------------------------------------------

/// Chart components of the canonical basis field K_{which} (which in {0,1,2}).
Vector2d killing_basis_value(const ModelSurface& s, const ChartPoint& p, int which);

/// Partial-derivative Jacobian d(K_which)^i / d(chart)^j.
Matrix2d killing_basis_jacobian(const ModelSurface& s, const ChartPoint& p, int which);

/// The canonical basis (K1, K2, K3) at p.
std::array<TangentVector, 3> killing_basis_at(const ModelSurface& s, const ChartPoint& p);

Vector2d killing_value(const KillingField& K, const ChartPoint& p);

/// Covariant derivative (nabla_v K)|_p in chart components.
Vector2d killing_covariant_deriv(const KillingField& K, const ChartPoint& p, const Vector2d& v);

/// The unique Killing field whose integral curve through p is the geodesic
/// with initial velocity v, normalized so K(p) = v. Solves the linear system
/// K(p) = v together with nabla_v K|_p = 0 in least squares and checks the
/// residual.
KillingField killing_for_geodesic(const ModelSurface& s, const ChartPoint& p, const Vector2d& v);

// -- geodesics and distances -------------------------------------------------

/// Point at arclength dist along the unit-speed geodesic from p in direction
/// v/|v| (closed form per model space).
ChartPoint geodesic(const ModelSurface& s, const ChartPoint& p, const Vector2d& v, double dist);

double geodesic_distance(const ModelSurface& s, const ChartPoint& p, const ChartPoint& q);

// -- geodesic polar coordinates ----------------------------------------------

/// Geodesic polar coordinates of p about pole; the reference frame at the
/// pole is the chart-aligned orthonormal frame. Throws CutLocus on S2 when
/// r >= pi - band.
PolarCoords polar_from_chart(const ModelSurface& s, const ChartPoint& pole, const ChartPoint& p);

ChartPoint chart_from_polar(const ModelSurface& s, const ChartPoint& pole, double r, double t);

/// Jacobian d(chart)/d(r,t) of chart_from_polar at (r, t), columns (d/dr, d/dt).
Matrix2d polar_chart_jacobian(const ModelSurface& s, const ChartPoint& pole, double r, double t);

// -- S2 embedding helpers (used by the closed forms and by tests) -------------

Vector3d s2_embed(const ChartPoint& p);
ChartPoint s2_unembed(const ModelSurface& s, const Vector3d& P);

}  // namespace curvlab
