#include "curvlab/geometry.hpp"

#include <complex>

namespace curvlab {

namespace {

using Complex = std::complex<double>;

Complex to_complex(const Vector2d& v) { return {v[0], v[1]}; }
Vector2d to_vec(const Complex& z) { return {z.real(), z.imag()}; }

void require_regular(const ModelSurface& s, const ChartPoint& p, const char* where) {
  if (s.curvature == Curvature::Sphere && p.pole_adjacent)
    throw Error(ErrorCode::SingularChartPoint, where);
  if (s.curvature == Curvature::Hyperbolic && p.coords.squaredNorm() >= 1.0)
    throw Error(ErrorCode::InvalidArgument, std::string(where) + ": point outside Poincare disk");
}

double wrap_angle(double t) {
  t = std::fmod(t, 2.0 * M_PI);
  if (t < 0) t += 2.0 * M_PI;
  return t;
}

}  // namespace

const char* error_code_name(ErrorCode code) {
  switch (code) {
    case ErrorCode::SingularChartPoint: return "SingularChartPoint";
    case ErrorCode::CutLocus: return "CutLocus";
    case ErrorCode::ZeroVector: return "ZeroVector";
    case ErrorCode::GridTooCoarse: return "GridTooCoarse";
    case ErrorCode::SolverDiverged: return "SolverDiverged";
    case ErrorCode::NewtonStalled: return "NewtonStalled";
    case ErrorCode::NonPositiveSolution: return "NonPositiveSolution";
    case ErrorCode::DegenerateTangency: return "DegenerateTangency";
    case ErrorCode::NotApplicable: return "NotApplicable";
    case ErrorCode::ZeroOnCircle: return "ZeroOnCircle";
    case ErrorCode::IdenticallyZero: return "IdenticallyZero";
    case ErrorCode::RefinementFailed: return "RefinementFailed";
    case ErrorCode::ProfileInvalid: return "ProfileInvalid";
    case ErrorCode::MultiplicityAmbiguous: return "MultiplicityAmbiguous";
    case ErrorCode::InvalidArgument: return "InvalidArgument";
  }
  return "Error";
}

ModelSurface surface_from_name(const std::string& name) {
  if (name == "R2" || name == "r2") return ModelSurface::R2();
  if (name == "S2" || name == "s2") return ModelSurface::S2();
  if (name == "H2" || name == "h2") return ModelSurface::H2();
  throw Error(ErrorCode::InvalidArgument, "unknown surface '" + name + "'");
}

Matrix2d metric_at(const ModelSurface& s, const ChartPoint& p) {
  require_regular(s, p, "metric_at");
  switch (s.curvature) {
    case Curvature::Flat:
      return Matrix2d::Identity();
    case Curvature::Sphere: {
      const double st = std::sin(p.x());
      return Vector2d(1.0, st * st).asDiagonal();
    }
    case Curvature::Hyperbolic: {
      const double c = 2.0 / (1.0 - p.coords.squaredNorm());
      return (c * c) * Matrix2d::Identity();
    }
  }
  return Matrix2d::Identity();
}

std::array<Matrix2d, 2> christoffel_at(const ModelSurface& s, const ChartPoint& p) {
  require_regular(s, p, "christoffel_at");
  std::array<Matrix2d, 2> gamma = {Matrix2d::Zero(), Matrix2d::Zero()};
  switch (s.curvature) {
    case Curvature::Flat:
      break;
    case Curvature::Sphere: {
      const double theta = p.x();
      const double cot = std::cos(theta) / std::sin(theta);
      gamma[0](1, 1) = -std::sin(theta) * std::cos(theta);
      gamma[1](0, 1) = gamma[1](1, 0) = cot;
      break;
    }
    case Curvature::Hyperbolic: {
      // Conformal metric exp(2*sigma) * I with sigma = log(2/(1-|z|^2)).
      const double d = 1.0 - p.coords.squaredNorm();
      const double sx = 2.0 * p.x() / d;
      const double sy = 2.0 * p.y() / d;
      gamma[0] << sx, sy, sy, -sx;
      gamma[1] << -sy, sx, sx, sy;
      break;
    }
  }
  return gamma;
}

double norm(const ModelSurface& s, const TangentVector& v) {
  return std::sqrt(inner(metric_at(s, v.base), v.components, v.components));
}

Matrix2d frame_at(const ModelSurface& s, const ChartPoint& p) {
  require_regular(s, p, "frame_at");
  switch (s.curvature) {
    case Curvature::Flat:
      return Matrix2d::Identity();
    case Curvature::Sphere:
      return Vector2d(1.0, 1.0 / std::sin(p.x())).asDiagonal();
    case Curvature::Hyperbolic:
      return 0.5 * (1.0 - p.coords.squaredNorm()) * Matrix2d::Identity();
  }
  return Matrix2d::Identity();
}

Vector2d killing_basis_value(const ModelSurface& s, const ChartPoint& p, int which) {
  require_regular(s, p, "killing_basis_value");
  const double x = p.x(), y = p.y();
  switch (s.curvature) {
    case Curvature::Flat:
      switch (which) {
        case 0: return {1.0, 0.0};
        case 1: return {0.0, 1.0};
        case 2: return {-y, x};
      }
      break;
    case Curvature::Sphere: {
      const double cot = std::cos(x) / std::sin(x);
      switch (which) {
        case 0: return {std::sin(y), cot * std::cos(y)};
        case 1: return {std::cos(y), -cot * std::sin(y)};
        case 2: return {0.0, 1.0};
      }
      break;
    }
    case Curvature::Hyperbolic:
      switch (which) {
        case 0: return {0.5 * (1.0 - x * x + y * y), -x * y};
        case 1: return {-x * y, 0.5 * (1.0 + x * x - y * y)};
        case 2: return {-y, x};
      }
      break;
  }
  throw Error(ErrorCode::InvalidArgument, "killing basis index out of range");
}

Matrix2d killing_basis_jacobian(const ModelSurface& s, const ChartPoint& p, int which) {
  require_regular(s, p, "killing_basis_jacobian");
  const double x = p.x(), y = p.y();
  Matrix2d J = Matrix2d::Zero();
  switch (s.curvature) {
    case Curvature::Flat:
      if (which == 2) J << 0, -1, 1, 0;
      return J;
    case Curvature::Sphere: {
      const double st = std::sin(x);
      const double cot = std::cos(x) / st;
      const double csc2 = 1.0 / (st * st);
      switch (which) {
        case 0:
          J << 0, std::cos(y), -csc2 * std::cos(y), -cot * std::sin(y);
          return J;
        case 1:
          J << 0, -std::sin(y), csc2 * std::sin(y), -cot * std::cos(y);
          return J;
        case 2:
          return J;
      }
      break;
    }
    case Curvature::Hyperbolic:
      switch (which) {
        case 0:
          J << -x, y, -y, -x;
          return J;
        case 1:
          J << -y, -x, x, -y;
          return J;
        case 2:
          J << 0, -1, 1, 0;
          return J;
      }
      break;
  }
  throw Error(ErrorCode::InvalidArgument, "killing basis index out of range");
}

std::array<TangentVector, 3> killing_basis_at(const ModelSurface& s, const ChartPoint& p) {
  return {TangentVector{p, killing_basis_value(s, p, 0)},
          TangentVector{p, killing_basis_value(s, p, 1)},
          TangentVector{p, killing_basis_value(s, p, 2)}};
}

Vector2d killing_value(const KillingField& K, const ChartPoint& p) {
  Vector2d v = Vector2d::Zero();
  for (int w = 0; w < 3; ++w)
    if (K.basis_coeffs[w] != 0.0) v += K.basis_coeffs[w] * killing_basis_value(K.surface, p, w);
  return v;
}

Vector2d killing_covariant_deriv(const KillingField& K, const ChartPoint& p, const Vector2d& v) {
  Vector2d value = Vector2d::Zero();
  Matrix2d jac = Matrix2d::Zero();
  for (int w = 0; w < 3; ++w) {
    if (K.basis_coeffs[w] == 0.0) continue;
    value += K.basis_coeffs[w] * killing_basis_value(K.surface, p, w);
    jac += K.basis_coeffs[w] * killing_basis_jacobian(K.surface, p, w);
  }
  const auto gamma = christoffel_at(K.surface, p);
  Vector2d out = jac * v;
  out[0] += v.dot(gamma[0] * value);
  out[1] += v.dot(gamma[1] * value);
  return out;
}

KillingField killing_for_geodesic(const ModelSurface& s, const ChartPoint& p, const Vector2d& v) {
  if (v.norm() < 1e-14) throw Error(ErrorCode::ZeroVector, "killing_for_geodesic");
  const auto gamma = christoffel_at(s, p);
  Eigen::Matrix<double, 4, 3> M;
  for (int w = 0; w < 3; ++w) {
    const Vector2d Kw = killing_basis_value(s, p, w);
    const Matrix2d Jw = killing_basis_jacobian(s, p, w);
    Vector2d dv = Jw * v;
    dv[0] += v.dot(gamma[0] * Kw);
    dv[1] += v.dot(gamma[1] * Kw);
    M(0, w) = Kw[0];
    M(1, w) = Kw[1];
    M(2, w) = dv[0];
    M(3, w) = dv[1];
  }
  Eigen::Vector4d rhs;
  rhs << v[0], v[1], 0.0, 0.0;
  const Vector3d coeffs = M.colPivHouseholderQr().solve(rhs);
  const double resid = (M * coeffs - rhs).norm();
  if (resid > 1e-8 * std::max(1.0, v.norm()))
    throw Error(ErrorCode::SolverDiverged, "killing_for_geodesic: inconsistent system");
  return KillingField{s, coeffs};
}

Vector3d s2_embed(const ChartPoint& p) {
  const double theta = p.x(), phi = p.y();
  return {std::sin(theta) * std::cos(phi), std::sin(theta) * std::sin(phi), std::cos(theta)};
}

ChartPoint s2_unembed(const ModelSurface& s, const Vector3d& P) {
  const double z = std::clamp(P[2] / P.norm(), -1.0, 1.0);
  const double theta = std::acos(z);
  double phi = 0.0;
  if (std::hypot(P[0], P[1]) > 1e-300) phi = wrap_angle(std::atan2(P[1], P[0]));
  return ChartPoint(s, theta, phi);
}

namespace {

// Orthonormal frame (e1, e2) at a spherical chart point, embedded in R^3:
// e1 = e_theta, e2 = e_phi / sin(theta).
void s2_frame(const ChartPoint& p, Vector3d& e1, Vector3d& e2) {
  const double theta = p.x(), phi = p.y();
  e1 = {std::cos(theta) * std::cos(phi), std::cos(theta) * std::sin(phi), -std::sin(theta)};
  e2 = {-std::sin(phi), std::cos(phi), 0.0};
}

}  // namespace

ChartPoint geodesic(const ModelSurface& s, const ChartPoint& p, const Vector2d& v, double dist) {
  if (v.norm() < 1e-14) throw Error(ErrorCode::ZeroVector, "geodesic");
  switch (s.curvature) {
    case Curvature::Flat: {
      const Vector2d q = p.coords + dist * v.normalized();
      return ChartPoint(s, q);
    }
    case Curvature::Sphere: {
      require_regular(s, p, "geodesic");
      const Vector3d P = s2_embed(p);
      Vector3d e1, e2;
      s2_frame(p, e1, e2);
      // Chart components -> embedded tangent (e_phi = sin(theta) * e2).
      Vector3d V = v[0] * e1 + v[1] * std::sin(p.x()) * e2;
      V.normalize();
      return s2_unembed(s, std::cos(dist) * P + std::sin(dist) * V);
    }
    case Curvature::Hyperbolic: {
      require_regular(s, p, "geodesic");
      const Complex z0 = to_complex(p.coords);
      const Complex dir = to_complex(v) / std::abs(to_complex(v));
      const Complex w = std::tanh(0.5 * dist) * dir;
      return ChartPoint(s, to_vec((z0 + w) / (1.0 + std::conj(z0) * w)));
    }
  }
  return p;
}

double geodesic_distance(const ModelSurface& s, const ChartPoint& p, const ChartPoint& q) {
  switch (s.curvature) {
    case Curvature::Flat:
      return (p.coords - q.coords).norm();
    case Curvature::Sphere: {
      const double c = std::clamp(s2_embed(p).dot(s2_embed(q)), -1.0, 1.0);
      return std::acos(c);
    }
    case Curvature::Hyperbolic: {
      const Complex zp = to_complex(p.coords), zq = to_complex(q.coords);
      const double m = std::abs((zq - zp) / (1.0 - std::conj(zp) * zq));
      return 2.0 * std::atanh(std::min(m, 1.0 - 1e-17));
    }
  }
  return 0.0;
}

PolarCoords polar_from_chart(const ModelSurface& s, const ChartPoint& pole, const ChartPoint& p) {
  switch (s.curvature) {
    case Curvature::Flat: {
      const Vector2d d = p.coords - pole.coords;
      if (d.norm() == 0.0) throw Error(ErrorCode::InvalidArgument, "polar_from_chart: p == pole");
      return {d.norm(), wrap_angle(std::atan2(d[1], d[0]))};
    }
    case Curvature::Sphere: {
      require_regular(s, pole, "polar_from_chart (pole)");
      const Vector3d P0 = s2_embed(pole);
      const Vector3d Q = s2_embed(p);
      const double c = std::clamp(P0.dot(Q), -1.0, 1.0);
      const double r = std::acos(c);
      if (r >= M_PI - kSingularBand) throw Error(ErrorCode::CutLocus, "polar_from_chart");
      if (r == 0.0) throw Error(ErrorCode::InvalidArgument, "polar_from_chart: p == pole");
      Vector3d W = Q - c * P0;
      W.normalize();
      Vector3d e1, e2;
      s2_frame(pole, e1, e2);
      return {r, wrap_angle(std::atan2(W.dot(e2), W.dot(e1)))};
    }
    case Curvature::Hyperbolic: {
      const Complex zp = to_complex(pole.coords), zq = to_complex(p.coords);
      const Complex w = (zq - zp) / (1.0 - std::conj(zp) * zq);
      if (std::abs(w) == 0.0) throw Error(ErrorCode::InvalidArgument, "polar_from_chart: p == pole");
      return {2.0 * std::atanh(std::abs(w)), wrap_angle(std::arg(w))};
    }
  }
  return {0.0, 0.0};
}

ChartPoint chart_from_polar(const ModelSurface& s, const ChartPoint& pole, double r, double t) {
  if (r < 0) throw Error(ErrorCode::InvalidArgument, "chart_from_polar: negative radius");
  switch (s.curvature) {
    case Curvature::Flat:
      return ChartPoint(s, pole.coords + r * Vector2d(std::cos(t), std::sin(t)));
    case Curvature::Sphere: {
      require_regular(s, pole, "chart_from_polar (pole)");
      if (r > M_PI) throw Error(ErrorCode::CutLocus, "chart_from_polar");
      Vector3d e1, e2;
      s2_frame(pole, e1, e2);
      const Vector3d V = std::cos(t) * e1 + std::sin(t) * e2;
      return s2_unembed(s, std::cos(r) * s2_embed(pole) + std::sin(r) * V);
    }
    case Curvature::Hyperbolic: {
      const Complex zp = to_complex(pole.coords);
      const Complex w = std::tanh(0.5 * r) * std::exp(Complex(0.0, t));
      return ChartPoint(s, to_vec((zp + w) / (1.0 + std::conj(zp) * w)));
    }
  }
  return pole;
}

Matrix2d polar_chart_jacobian(const ModelSurface& s, const ChartPoint& pole, double r, double t) {
  Matrix2d J;
  switch (s.curvature) {
    case Curvature::Flat:
      J << std::cos(t), -r * std::sin(t), std::sin(t), r * std::cos(t);
      return J;
    case Curvature::Sphere: {
      require_regular(s, pole, "polar_chart_jacobian (pole)");
      const Vector3d P0 = s2_embed(pole);
      Vector3d e1, e2;
      s2_frame(pole, e1, e2);
      const Vector3d V = std::cos(t) * e1 + std::sin(t) * e2;
      const Vector3d P = std::cos(r) * P0 + std::sin(r) * V;
      const Vector3d dPdr = -std::sin(r) * P0 + std::cos(r) * V;
      const Vector3d dPdt = std::sin(r) * (-std::sin(t) * e1 + std::cos(t) * e2);
      const double st2 = P[0] * P[0] + P[1] * P[1];  // sin^2(theta)
      if (st2 < kSingularBand * kSingularBand)
        throw Error(ErrorCode::SingularChartPoint, "polar_chart_jacobian");
      const double st = std::sqrt(st2);
      // d(theta) = -dz / sin(theta), d(phi) = (x dy - y dx) / sin^2(theta)
      J << -dPdr[2] / st, -dPdt[2] / st,
          (P[0] * dPdr[1] - P[1] * dPdr[0]) / st2, (P[0] * dPdt[1] - P[1] * dPdt[0]) / st2;
      return J;
    }
    case Curvature::Hyperbolic: {
      const Complex zp = to_complex(pole.coords);
      const Complex eit = std::exp(Complex(0.0, t));
      const Complex w = std::tanh(0.5 * r) * eit;
      const Complex denom = 1.0 + std::conj(zp) * w;
      const Complex c = (1.0 - std::norm(zp)) / (denom * denom);
      const double sech = 1.0 / std::cosh(0.5 * r);
      const Complex dqdr = c * (0.5 * sech * sech) * eit;
      const Complex dqdt = c * Complex(0.0, 1.0) * w;
      J << dqdr.real(), dqdt.real(), dqdr.imag(), dqdt.imag();
      return J;
    }
  }
  return Matrix2d::Identity();
}

}  // namespace curvlab
