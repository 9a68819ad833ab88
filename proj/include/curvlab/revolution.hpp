#pragma once

#include <Eigen/Dense>
#include <functional>
#include <string>
#include <vector>

namespace curvlab {

/// Warp profile of an n-dimensional manifold of revolution with metric
/// dr^2 + Theta(r)^2 g_{S^{n-1}} on (0, D); Theta(0) = 0, Theta'(0) = 1, and
/// for closed manifolds Theta(D) = 0, Theta'(D) = -1. The sectional curvature
/// proxy is -Theta''/Theta.
struct RevolutionProfile {
  std::string name;
  int n = 2;
  double D = M_PI;
  bool closed = false;
  std::function<double(double)> theta, theta1, theta2;

  static RevolutionProfile sphere(int n = 2);                      // closed, Theta = sin
  static RevolutionProfile spherical_cap(double D, int n = 2);     // boundary, Theta = sin
  static RevolutionProfile euclidean_disc(double D, int n = 2);    // boundary, Theta = r
  static RevolutionProfile hyperbolic_disc(double D, int n = 2);   // boundary, Theta = sinh
  /// Closed profile Theta = sin(r) (1 + sum_k eps_k sin(2 k r)) on [0, pi].
  static RevolutionProfile perturbed_sphere(const std::vector<double>& eps, int n = 2);

  void validate() const;
  /// min of -Theta''/Theta over a dense interior grid.
  double min_curvature(int samples = 4096) const;
};

enum class RadialBc { DirichletAtD, ClosedRegular };

struct SturmLiouvilleProblem {
  RevolutionProfile profile;
  int l = 0;
  RadialBc bc = RadialBc::DirichletAtD;
};

struct RadialEigenpair {
  double lambda = 0.0;
  Eigen::VectorXd r;  // cell centers
  Eigen::VectorXd u;  // weighted-L2 normalized samples
  int k = 0, l = 0;
  double residual = 0.0;
};

/// k_max smallest eigenpairs of the radial problem
///   -u'' - (n-1) (Theta'/Theta) u' + l(l+n-2)/Theta^2 u = lambda u
/// by a cell-centered finite-volume scheme in the Theta^{n-1} dr measure
/// (singular endpoints carry zero flux weight and need no boundary handling)
/// with Sturm-sequence bisection and tridiagonal inverse iteration.
std::vector<RadialEigenpair> sl_eigen(const SturmLiouvilleProblem& prob, int k_max,
                                      int grid_n = 2048);

struct MonotonicityReport {
  double lambda = 0.0;
  bool decreasing = false;          // u' < 0 on (0, D)
  bool flux_nonincreasing = false;  // Theta^{n-1} u' non-increasing
  int critical_count = 0;           // interior sign changes of u' plus the max at r = 0
};

/// First Dirichlet eigenfunction on a boundary profile: radial monotonicity
/// and critical-point count.
MonotonicityReport first_dirichlet_monotonicity(const RevolutionProfile& profile,
                                                int grid_n = 2048);

enum class MultClass { Radial, L1, Mixed };

const char* mult_class_name(MultClass c);

struct ClosedSecondEigenReport {
  MultClass mult_class = MultClass::Radial;
  double lambda_20 = 0.0, lambda_11 = 0.0;
  bool curvature_positive = false;
  bool u11_positive = false;
  int u11_crit_count = 0;     // zeros of u_{1,1}' in (0, D); predicted 1
  int nprime_zero_count = 0;  // zeros of N' = (Theta^{n-1} u_{1,1}')'; predicted 2
  bool applicable = false;    // curvature hypothesis holds
  bool verdict_pass = false;  // counts match predictions (gated on the hypothesis)
};

ClosedSecondEigenReport closed_second_eigen_analysis(const RevolutionProfile& profile,
                                                     int grid_n = 2048);

struct ConjectureProbeRow {
  std::string profile;
  double param = 0.0;
  bool hypothesis_ok = false;
  double lambda = 0.0;
  MultClass mult_class = MultClass::Radial;
  int crit_count = 0;
  int nprime_zeros = 0;
  bool two_critical_points = false;  // some second eigenfunction in the computed
                                     // basis has exactly two critical points
};

/// Sweep of a one-parameter family of closed positive-curvature profiles;
/// each member runs closed_second_eigen_analysis. Rows violating the
/// curvature hypothesis are kept but flagged and not analysed.
std::vector<ConjectureProbeRow> conjecture_probe(
    const std::function<RevolutionProfile(double)>& family, double param_lo, double param_hi,
    int samples, int grid_n = 2048);

/// Key-value text record for profiles (see docs/formats.md).
RevolutionProfile parse_profile(const std::string& text);

}  // namespace curvlab
