#include "curvlab/revolution.hpp"

#include <sstream>

#include "curvlab/error.hpp"

namespace curvlab {

RevolutionProfile RevolutionProfile::sphere(int n) {
  RevolutionProfile p;
  p.name = "sphere";
  p.n = n;
  p.D = M_PI;
  p.closed = true;
  p.theta = [](double r) { return std::sin(r); };
  p.theta1 = [](double r) { return std::cos(r); };
  p.theta2 = [](double r) { return -std::sin(r); };
  return p;
}

RevolutionProfile RevolutionProfile::spherical_cap(double D, int n) {
  RevolutionProfile p = sphere(n);
  p.name = "cap";
  p.D = D;
  p.closed = false;
  return p;
}

RevolutionProfile RevolutionProfile::euclidean_disc(double D, int n) {
  RevolutionProfile p;
  p.name = "disc";
  p.n = n;
  p.D = D;
  p.closed = false;
  p.theta = [](double r) { return r; };
  p.theta1 = [](double) { return 1.0; };
  p.theta2 = [](double) { return 0.0; };
  return p;
}

RevolutionProfile RevolutionProfile::hyperbolic_disc(double D, int n) {
  RevolutionProfile p;
  p.name = "hyp_disc";
  p.n = n;
  p.D = D;
  p.closed = false;
  p.theta = [](double r) { return std::sinh(r); };
  p.theta1 = [](double r) { return std::cosh(r); };
  p.theta2 = [](double r) { return std::sinh(r); };
  return p;
}

RevolutionProfile RevolutionProfile::perturbed_sphere(const std::vector<double>& eps, int n) {
  RevolutionProfile p;
  std::ostringstream name;
  name << "perturbed_sphere";
  for (double e : eps) name << "_" << e;
  p.name = name.str();
  p.n = n;
  p.D = M_PI;
  p.closed = true;
  auto g = [eps](double r) {
    double v = 1.0;
    for (size_t k = 0; k < eps.size(); ++k) v += eps[k] * std::sin(2.0 * (k + 1) * r);
    return v;
  };
  auto g1 = [eps](double r) {
    double v = 0.0;
    for (size_t k = 0; k < eps.size(); ++k) v += 2.0 * (k + 1) * eps[k] * std::cos(2.0 * (k + 1) * r);
    return v;
  };
  auto g2 = [eps](double r) {
    double v = 0.0;
    for (size_t k = 0; k < eps.size(); ++k)
      v -= 4.0 * (k + 1) * (k + 1) * eps[k] * std::sin(2.0 * (k + 1) * r);
    return v;
  };
  p.theta = [g](double r) { return std::sin(r) * g(r); };
  p.theta1 = [g, g1](double r) { return std::cos(r) * g(r) + std::sin(r) * g1(r); };
  p.theta2 = [g, g1, g2](double r) {
    return -std::sin(r) * g(r) + 2.0 * std::cos(r) * g1(r) + std::sin(r) * g2(r);
  };
  return p;
}

void RevolutionProfile::validate() const {
  if (n < 2) throw Error(ErrorCode::ProfileInvalid, "dimension must be >= 2");
  if (!(D > 0) || !std::isfinite(D)) throw Error(ErrorCode::ProfileInvalid, "diameter must be finite positive");
  if (std::abs(theta(0.0)) > 1e-12) throw Error(ErrorCode::ProfileInvalid, "Theta(0) != 0");
  if (std::abs(theta1(0.0) - 1.0) > 1e-10) throw Error(ErrorCode::ProfileInvalid, "Theta'(0) != 1");
  const int samples = 4096;
  for (int i = 1; i < samples; ++i) {
    const double r = D * i / samples;
    if (closed && i == samples - 1) break;
    if (theta(r) <= 0.0 && (!closed || i < samples - 1))
      throw Error(ErrorCode::ProfileInvalid, "Theta must be positive on (0, D)");
  }
  if (closed) {
    if (std::abs(theta(D)) > 1e-10) throw Error(ErrorCode::ProfileInvalid, "closed: Theta(D) != 0");
    if (std::abs(theta1(D) + 1.0) > 1e-10)
      throw Error(ErrorCode::ProfileInvalid, "closed: Theta'(D) != -1");
  }
}

double RevolutionProfile::min_curvature(int samples) const {
  double m = std::numeric_limits<double>::infinity();
  const double delta = 1e-3 * D;
  for (int i = 0; i <= samples; ++i) {
    const double r = delta + (D - 2 * delta) * i / samples;
    m = std::min(m, -theta2(r) / theta(r));
  }
  return m;
}

namespace {

struct Tridiag {
  Eigen::VectorXd diag, off;  // symmetric, off has size N-1
};

// Number of eigenvalues of the symmetric tridiagonal matrix below x
// (Sturm sequence via the LDL^T recurrence).
int sturm_count(const Tridiag& T, double x) {
  const int N = T.diag.size();
  int count = 0;
  double q = T.diag[0] - x;
  if (q < 0) ++count;
  for (int i = 1; i < N; ++i) {
    const double denom = q == 0.0 ? 1e-300 : q;
    q = T.diag[i] - x - T.off[i - 1] * T.off[i - 1] / denom;
    if (q < 0) ++count;
  }
  return count;
}

double bisect_kth(const Tridiag& T, int k /* 1-based */, double lo, double hi) {
  for (int it = 0; it < 200 && hi - lo > 1e-14 * std::max(1.0, std::abs(lo) + std::abs(hi));
       ++it) {
    const double mid = 0.5 * (lo + hi);
    if (sturm_count(T, mid) >= k)
      hi = mid;
    else
      lo = mid;
  }
  return 0.5 * (lo + hi);
}

// One inverse-iteration pass for the eigenvector of a shifted tridiagonal
// system (Thomas algorithm, no pivoting; adequate for well-separated shifts).
Eigen::VectorXd tridiag_solve(const Tridiag& T, double shift, const Eigen::VectorXd& b) {
  const int N = T.diag.size();
  Eigen::VectorXd c(N), d(N);
  double denom = T.diag[0] - shift;
  if (std::abs(denom) < 1e-300) denom = 1e-300;
  c[0] = (N > 1 ? T.off[0] : 0.0) / denom;
  d[0] = b[0] / denom;
  for (int i = 1; i < N; ++i) {
    denom = T.diag[i] - shift - T.off[i - 1] * c[i - 1];
    if (std::abs(denom) < 1e-300) denom = 1e-300;
    c[i] = (i + 1 < N ? T.off[i] : 0.0) / denom;
    d[i] = (b[i] - T.off[i - 1] * d[i - 1]) / denom;
  }
  Eigen::VectorXd x(N);
  x[N - 1] = d[N - 1];
  for (int i = N - 2; i >= 0; --i) x[i] = d[i] - c[i] * x[i + 1];
  return x;
}

struct Discretization {
  Eigen::VectorXd r;     // cell centers
  Eigen::VectorXd mass;  // Theta^{n-1} at centers
  Eigen::VectorXd wface; // Theta^{n-1} at interior faces (size N-1)
  Tridiag T;             // M^{-1/2} A M^{-1/2}
  double h = 0.0;
};

Discretization discretize(const SturmLiouvilleProblem& prob, int N) {
  const RevolutionProfile& p = prob.profile;
  Discretization d;
  d.h = p.D / N;
  d.r.resize(N);
  d.mass.resize(N);
  d.wface.resize(N - 1);
  Eigen::VectorXd diagA(N);
  for (int i = 0; i < N; ++i) {
    d.r[i] = (i + 0.5) * d.h;
    d.mass[i] = std::pow(p.theta(d.r[i]), p.n - 1);
    if (i + 1 < N) d.wface[i] = std::pow(p.theta((i + 1) * d.h), p.n - 1);
  }
  const double c_l = prob.l * (prob.l + p.n - 2);
  for (int i = 0; i < N; ++i) {
    double w_lo = i == 0 ? 0.0 : d.wface[i - 1];
    double w_hi;
    if (i + 1 < N)
      w_hi = d.wface[i];
    else if (prob.bc == RadialBc::DirichletAtD)
      w_hi = 2.0 * std::pow(p.theta(p.D), p.n - 1);  // half-cell Dirichlet face
    else
      w_hi = 0.0;  // closed: Theta(D) = 0, zero flux weight
    const double th = p.theta(d.r[i]);
    diagA[i] = (w_lo + w_hi) / (d.h * d.h) + d.mass[i] * c_l / (th * th);
  }
  d.T.diag = diagA.cwiseQuotient(d.mass);
  d.T.off.resize(N - 1);
  for (int i = 0; i + 1 < N; ++i)
    d.T.off[i] = -d.wface[i] / (d.h * d.h) / std::sqrt(d.mass[i] * d.mass[i + 1]);
  return d;
}

}  // namespace

std::vector<RadialEigenpair> sl_eigen(const SturmLiouvilleProblem& prob, int k_max, int grid_n) {
  if (k_max < 1) throw Error(ErrorCode::InvalidArgument, "k_max must be >= 1");
  if (grid_n < 512) throw Error(ErrorCode::InvalidArgument, "grid resolution must be >= 512");
  prob.profile.validate();
  const Discretization d = discretize(prob, grid_n);
  const int N = grid_n;

  double glb = std::numeric_limits<double>::infinity();
  double gub = -glb;
  for (int i = 0; i < N; ++i) {
    const double lo_off = i > 0 ? std::abs(d.T.off[i - 1]) : 0.0;
    const double hi_off = i + 1 < N ? std::abs(d.T.off[i]) : 0.0;
    glb = std::min(glb, d.T.diag[i] - lo_off - hi_off);
    gub = std::max(gub, d.T.diag[i] + lo_off + hi_off);
  }

  std::vector<RadialEigenpair> out;
  for (int k = 1; k <= k_max; ++k) {
    RadialEigenpair ep;
    ep.k = k;
    ep.l = prob.l;
    ep.lambda = bisect_kth(d.T, k, glb, gub);
    // Inverse iteration in the symmetric similarity variables.
    const double spread = gub - glb;
    const double shift = ep.lambda + 1e-11 * spread;
    Eigen::VectorXd y = Eigen::VectorXd::Ones(N);
    for (int i = 0; i < N; ++i) y[i] += 1e-3 * std::sin(1000.0 * (i + 1));
    for (int pass = 0; pass < 3; ++pass) {
      y = tridiag_solve(d.T, shift, y);
      y /= y.norm();
    }
    // Rayleigh quotient polish.
    {
      Eigen::VectorXd Ty(N);
      for (int i = 0; i < N; ++i) {
        double v = d.T.diag[i] * y[i];
        if (i > 0) v += d.T.off[i - 1] * y[i - 1];
        if (i + 1 < N) v += d.T.off[i] * y[i + 1];
        Ty[i] = v;
      }
      ep.lambda = y.dot(Ty);
      ep.residual = (Ty - ep.lambda * y).norm() / std::max(std::abs(ep.lambda), 1.0);
    }
    ep.r = d.r;
    ep.u = y.cwiseQuotient(d.mass.cwiseSqrt());
    // Normalize in the weighted L2 norm and orient by the largest magnitude.
    double nrm2 = 0.0;
    for (int i = 0; i < N; ++i) nrm2 += d.mass[i] * ep.u[i] * ep.u[i] * d.h;
    ep.u /= std::sqrt(nrm2);
    Eigen::Index imax;
    ep.u.cwiseAbs().maxCoeff(&imax);
    if (ep.u[imax] < 0) ep.u = -ep.u;
    out.push_back(std::move(ep));
  }
  return out;
}

namespace {

// Sign changes of a sequence with a relative dead band.
int sign_changes(const Eigen::VectorXd& v, double dead) {
  int count = 0;
  int prev = 0;
  for (int i = 0; i < v.size(); ++i) {
    const int s = v[i] > dead ? 1 : (v[i] < -dead ? -1 : 0);
    if (s == 0) continue;
    if (prev != 0 && s != prev) ++count;
    prev = s;
  }
  return count;
}

}  // namespace

MonotonicityReport first_dirichlet_monotonicity(const RevolutionProfile& profile, int grid_n) {
  if (profile.closed) throw Error(ErrorCode::InvalidArgument, "boundary profile expected");
  SturmLiouvilleProblem prob{profile, 0, RadialBc::DirichletAtD};
  const RadialEigenpair ep = sl_eigen(prob, 1, grid_n).front();
  const int N = ep.u.size();
  const double h = profile.D / N;
  Eigen::VectorXd uprime(N - 1), flux(N - 1);
  for (int i = 0; i + 1 < N; ++i) {
    uprime[i] = (ep.u[i + 1] - ep.u[i]) / h;
    flux[i] = std::pow(profile.theta((i + 1) * h), profile.n - 1) * uprime[i];
  }
  const double scale = ep.u.cwiseAbs().maxCoeff() / h;
  MonotonicityReport rep;
  rep.lambda = ep.lambda;
  rep.decreasing = uprime.maxCoeff() < 1e-9 * scale;
  rep.critical_count = sign_changes(uprime, 1e-9 * scale) + 1;
  double worst_increase = 0.0;
  for (int i = 0; i + 2 < N; ++i) worst_increase = std::max(worst_increase, flux[i + 1] - flux[i]);
  rep.flux_nonincreasing = worst_increase < 1e-9 * flux.cwiseAbs().maxCoeff();
  return rep;
}

const char* mult_class_name(MultClass c) {
  switch (c) {
    case MultClass::Radial: return "radial";
    case MultClass::L1: return "l1";
    case MultClass::Mixed: return "mixed";
  }
  return "radial";
}

ClosedSecondEigenReport closed_second_eigen_analysis(const RevolutionProfile& profile,
                                                     int grid_n) {
  if (!profile.closed) throw Error(ErrorCode::InvalidArgument, "closed profile expected");
  ClosedSecondEigenReport rep;
  rep.curvature_positive = profile.min_curvature() > 0.0;

  SturmLiouvilleProblem radial{profile, 0, RadialBc::ClosedRegular};
  SturmLiouvilleProblem first_l1{profile, 1, RadialBc::ClosedRegular};
  const auto radial_pairs = sl_eigen(radial, 2, grid_n);
  const RadialEigenpair u11 = sl_eigen(first_l1, 1, grid_n).front();
  rep.lambda_20 = radial_pairs[1].lambda;
  rep.lambda_11 = u11.lambda;

  const double tol = 1e-6 * std::max(std::abs(rep.lambda_20), std::abs(rep.lambda_11));
  if (std::abs(rep.lambda_20 - rep.lambda_11) <= tol)
    rep.mult_class = MultClass::Mixed;
  else if (rep.lambda_11 < rep.lambda_20)
    rep.mult_class = MultClass::L1;
  else
    rep.mult_class = MultClass::Radial;

  // l = 1 branch diagnostics: u_{1,1} > 0, u' with one zero, N' with two.
  const int N = u11.u.size();
  const double h = profile.D / N;
  rep.u11_positive = u11.u.minCoeff() > -1e-7 * u11.u.maxCoeff();
  Eigen::VectorXd uprime(N - 1), flux(N - 1);
  for (int i = 0; i + 1 < N; ++i) {
    uprime[i] = (u11.u[i + 1] - u11.u[i]) / h;
    flux[i] = std::pow(profile.theta((i + 1) * h), profile.n - 1) * uprime[i];
  }
  const double uscale = u11.u.cwiseAbs().maxCoeff() / h;
  rep.u11_crit_count = sign_changes(uprime, 1e-9 * uscale);
  Eigen::VectorXd nprime(N - 2);
  for (int i = 0; i + 2 < N; ++i) nprime[i] = (flux[i + 1] - flux[i]) / h;
  rep.nprime_zero_count = sign_changes(nprime, 1e-9 * nprime.cwiseAbs().maxCoeff());

  rep.applicable = rep.curvature_positive;
  rep.verdict_pass = rep.applicable && rep.u11_positive && rep.u11_crit_count == 1 &&
                     rep.nprime_zero_count == 2;
  return rep;
}

std::vector<ConjectureProbeRow> conjecture_probe(
    const std::function<RevolutionProfile(double)>& family, double param_lo, double param_hi,
    int samples, int grid_n) {
  std::vector<ConjectureProbeRow> rows;
  for (int i = 0; i < samples; ++i) {
    const double eps =
        samples == 1 ? param_lo : param_lo + (param_hi - param_lo) * i / (samples - 1);
    const RevolutionProfile p = family(eps);
    ConjectureProbeRow row;
    row.profile = p.name;
    row.param = eps;
    row.hypothesis_ok = p.min_curvature() > 0.0;
    if (row.hypothesis_ok) {
      const ClosedSecondEigenReport rep = closed_second_eigen_analysis(p, grid_n);
      row.lambda = std::min(rep.lambda_20, rep.lambda_11);
      row.mult_class = rep.mult_class;
      row.crit_count = rep.u11_crit_count;
      row.nprime_zeros = rep.nprime_zero_count;
      // u = u_{1,1} H_1 with u_{1,1} single-peaked has exactly one max and one
      // min; the radial branch inherits two critical points from the
      // monotonicity of the two Dirichlet halves.
      row.two_critical_points = rep.mult_class == MultClass::Radial
                                    ? true
                                    : (rep.u11_crit_count == 1 && rep.u11_positive);
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

RevolutionProfile parse_profile(const std::string& text) {
  std::istringstream in(text);
  std::string line, name = "profile", kind;
  int n = 2;
  double D = -1.0;
  bool closed = false;
  std::vector<double> params;
  while (std::getline(in, line)) {
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    const auto eq = line.find('=');
    if (eq == std::string::npos) continue;
    std::string key = line.substr(0, eq);
    std::string val = line.substr(eq + 1);
    key.erase(0, key.find_first_not_of(" \t"));
    key.erase(key.find_last_not_of(" \t") + 1);
    val.erase(0, val.find_first_not_of(" \t"));
    val.erase(val.find_last_not_of(" \t\r") + 1);
    if (key == "name") name = val;
    else if (key == "n") n = std::stoi(val);
    else if (key == "D") D = std::stod(val);
    else if (key == "closed") closed = val == "true" || val == "1";
    else if (key == "theta_kind") kind = val;
    else if (key == "params") {
      std::istringstream pv(val);
      double x;
      while (pv >> x) params.push_back(x);
    }
  }
  RevolutionProfile p;
  if (kind == "sin") {
    p = closed ? RevolutionProfile::sphere(n)
               : RevolutionProfile::spherical_cap(D > 0 ? D : M_PI_2, n);
  } else if (kind == "id") {
    if (closed) throw Error(ErrorCode::ProfileInvalid, "theta_kind id cannot be closed");
    p = RevolutionProfile::euclidean_disc(D > 0 ? D : 1.0, n);
  } else if (kind == "sinh") {
    if (closed) throw Error(ErrorCode::ProfileInvalid, "theta_kind sinh cannot be closed");
    p = RevolutionProfile::hyperbolic_disc(D > 0 ? D : 1.0, n);
  } else if (kind == "fourier_perturbed") {
    if (!closed) throw Error(ErrorCode::ProfileInvalid, "fourier_perturbed profiles are closed");
    p = RevolutionProfile::perturbed_sphere(params, n);
  } else {
    throw Error(ErrorCode::ProfileInvalid, "unknown theta_kind '" + kind + "'");
  }
  p.name = name;
  p.validate();
  return p;
}

}  // namespace curvlab
