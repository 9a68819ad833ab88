#pragma once

#include <string>
#include <vector>

#include "curvlab/geometry.hpp"

namespace curvlab {

/// Smooth 2*pi-periodic radial profile given as a truncated Fourier series
/// rho(t) = c0 + sum_m (c_m cos(m t) + s_m sin(m t)).
struct FourierProfile {
  Eigen::VectorXd cos_coeffs;  // c_0, c_1, ...
  Eigen::VectorXd sin_coeffs;  // s_1, s_2, ... (may be empty)

  static FourierProfile constant(double radius);

  double value(double t) const;
  double deriv(double t) const;
  double second_deriv(double t) const;

  double min_value(int samples = 2048) const;
  double max_value(int samples = 2048) const;
};

/// A star-shaped domain r < rho(t) in geodesic polar coordinates about an
/// interior pole. Geodesic convexity is a checked predicate, not assumed.
struct DomainSpec {
  ModelSurface surface;
  ChartPoint pole;
  FourierProfile profile;
  std::string label;
};

struct BoundaryPoint {
  double t = 0.0;
  ChartPoint position;
  TangentVector unit_tangent;
  TangentVector outward_normal;
  double curvature = 0.0;
};

BoundaryPoint boundary_point(const DomainSpec& d, double t);

/// Geodesic curvature of the boundary at parameter t, positive for convex
/// boundaries with respect to the outward orientation.
double boundary_curvature(const DomainSpec& d, double t);

struct HypothesesReport {
  bool ok = false;
  double min_curvature = 0.0;
  double diameter = 0.0;        // computed for S2 only
  bool curvature_positive = false;
  bool diameter_ok = true;      // S2: diameter < pi/2
  bool horoconvex = true;       // H2: min curvature >= 1
  std::string detail;
};

/// The per-space convexity hypotheses: R2 requires kappa > 0; S2 additionally
/// requires boundary diameter < pi/2; H2 requires horoconvexity (kappa >= 1).
HypothesesReport check_hypotheses(const DomainSpec& d);

/// Number of transversal zeros of t -> <K, nu> on the boundary, i.e. of
/// tangencies of the integral curves of K with the boundary. Throws
/// DegenerateTangency for non-transversal zeros at sampling resolution or for
/// K identically tangent.
int count_boundary_tangencies(const DomainSpec& d, const KillingField& K, int samples = 1024);

/// Regression catalogue of named domains across the three model spaces.
std::vector<DomainSpec> builtin_domains();
DomainSpec builtin_domain(const std::string& label);

/// Key-value text record (see docs/formats.md).
std::string serialize_domain(const DomainSpec& d);
DomainSpec parse_domain(const std::string& text);
DomainSpec load_domain_file(const std::string& path);

}  // namespace curvlab
